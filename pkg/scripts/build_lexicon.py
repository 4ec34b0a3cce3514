#!/usr/bin/env python3
"""Regenerate the default lemma/POS lexicon shipped with the package.

The lexicon is deliberately hand-curated: a compact exception table for
irregular forms, ordered suffix rules for the regular morphology, and a
POS table over base lemmas. Run from the repo root:

    python scripts/build_lexicon.py
"""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "protoret" / "data" / "lexicon.json"

# Ordered: first matching rule wins. A rule (suffix, replacement, min_stem)
# applies when the surface ends with `suffix` and the remaining stem has at
# least `min_stem` characters. Rules whose replacement equals the suffix act
# as stop rules (e.g. "ss" blocks the bare "s" strip for "grass").
SUFFIX_RULES = [
    # plural / third person
    ["sses", "ss", 1],
    ["zzes", "zz", 1],
    ["ies", "y", 2],
    ["ches", "ch", 1],
    ["shes", "sh", 1],
    ["xes", "x", 1],
    ["ss", "ss", 1],
    ["s", "", 2],
    # progressive, consonant doubling first
    ["nning", "n", 1],
    ["tting", "t", 1],
    ["pping", "p", 1],
    ["mming", "m", 1],
    ["gging", "g", 1],
    ["dding", "d", 1],
    ["bbing", "b", 1],
    ["rring", "r", 1],
    ["lling", "ll", 1],
    ["ing", "", 3],
    # past tense, consonant doubling first
    ["nned", "n", 1],
    ["tted", "t", 1],
    ["pped", "p", 1],
    ["mmed", "m", 1],
    ["gged", "g", 1],
    ["dded", "d", 1],
    ["bbed", "b", 1],
    ["rred", "r", 1],
    ["lled", "ll", 1],
    ["ied", "y", 2],
    ["ssed", "ss", 1],
    ["eed", "eed", 1],
    ["ced", "ce", 1],
    ["sed", "se", 2],
    ["ved", "ve", 1],
    ["zed", "ze", 2],
    ["ed", "", 3],
]


def _expand(table):
    """Flatten {lemma: [form, ...]} into {form: lemma}."""
    out = {}
    for lemma, forms in table.items():
        for form in forms:
            out[form] = lemma
    return out


# Irregular inflections, keyed by lemma for readability.
IRREGULAR = {
    "be": ["is", "are", "was", "were", "am", "been", "being"],
    "have": ["has", "had", "having"],
    "do": ["does", "did", "done", "doing"],
    "go": ["goes", "went", "gone", "going"],
    "say": ["said", "saying"],
    "make": ["made", "making"],
    "take": ["took", "taken", "taking"],
    "give": ["gave", "given", "giving"],
    "get": ["got", "gotten"],
    "throw": ["threw", "thrown"],
    "catch": ["caught"],
    "sit": ["sat"],
    "run": ["ran"],
    "eat": ["ate", "eaten"],
    "hold": ["held"],
    "stand": ["stood"],
    "fly": ["flew", "flown"],
    "swim": ["swam", "swum"],
    "ride": ["rode", "ridden", "riding"],
    "write": ["wrote", "written", "writing"],
    "drive": ["drove", "driven", "driving"],
    "speak": ["spoke", "spoken"],
    "sing": ["sang", "sung"],
    "bring": ["brought"],
    "buy": ["bought"],
    "teach": ["taught"],
    "sleep": ["slept"],
    "keep": ["kept"],
    "leave": ["left", "leaving"],
    "feel": ["felt"],
    "build": ["built"],
    "send": ["sent"],
    "spend": ["spent"],
    "lose": ["lost", "losing"],
    "meet": ["met"],
    "pay": ["paid"],
    "hear": ["heard"],
    "find": ["found"],
    "tell": ["told"],
    "think": ["thought"],
    "see": ["saw", "seen", "seeing"],
    "know": ["knew", "known"],
    "grow": ["grew", "grown"],
    "draw": ["drew", "drawn"],
    "blow": ["blew", "blown"],
    "wear": ["wore", "worn"],
    "break": ["broke", "broken"],
    "choose": ["chose", "chosen", "choosing"],
    "freeze": ["froze", "frozen", "freezing"],
    "wake": ["woke", "woken", "waking"],
    "steal": ["stole", "stolen"],
    "fall": ["fell", "fallen"],
    "come": ["came", "coming"],
    "become": ["became", "becoming"],
    "begin": ["began", "begun"],
    "swing": ["swung"],
    "hang": ["hung"],
    "dig": ["dug"],
    "win": ["won"],
    "shoot": ["shot"],
    "sell": ["sold"],
    "feed": ["fed"],
    "lead": ["led"],
    "flee": ["fled"],
    "rise": ["rose", "risen", "rising"],
    "bend": ["bent"],
    "bite": ["bit", "bitten", "biting"],
    "deal": ["dealt"],
    "dive": ["dove", "diving"],
    "forget": ["forgot", "forgotten"],
    "hide": ["hid", "hidden", "hiding"],
    "lend": ["lent"],
    "light": ["lit"],
    "mean": ["meant"],
    "seek": ["sought"],
    "shake": ["shook", "shaken", "shaking"],
    "shine": ["shone", "shining"],
    "sink": ["sank", "sunk", "sinking"],
    "slide": ["slid", "sliding"],
    "spin": ["spun"],
    "spring": ["sprang", "sprung"],
    "stick": ["stuck"],
    "sting": ["stung"],
    "strike": ["struck", "striking"],
    "sweep": ["swept"],
    "tear": ["tore", "torn"],
    "understand": ["understood"],
    "weep": ["wept"],
    "add": ["added", "adding"],
    "die": ["dies", "died", "dying"],
    "lie": ["lies", "lied", "lying"],
    "tie": ["ties", "tied", "tying"],
    "free": ["freed", "freeing"],
    "agree": ["agreed", "agreeing"],
    "ache": ["aches", "ached", "aching"],
    "movie": ["movies"],
    "cookie": ["cookies"],
    "use": ["used", "using"],
    "like": ["liked", "liking"],
    "live": ["lived", "living"],
    "love": ["loving"],
    "move": ["moving"],
    "smile": ["smiled", "smiling"],
    "dance": ["dancing"],
    "race": ["racing"],
    "place": ["placing"],
    "close": ["closing"],
    "cause": ["causing"],
    "raise": ["raising"],
    "wave": ["waving"],
    "serve": ["serving"],
    "save": ["saving"],
    "share": ["sharing"],
    "stare": ["staring"],
    "prepare": ["preparing"],
    "hope": ["hoped", "hoping"],
    "bake": ["baked", "baking"],
    "gaze": ["gazing"],
    "chase": ["chasing"],
    "skate": ["skated", "skating"],
    "hike": ["hiked", "hiking"],
    "bike": ["biked", "biking"],
    "joke": ["joked", "joking"],
    "smoke": ["smoked", "smoking"],
    "poke": ["poked", "poking"],
    "trade": ["traded", "trading"],
    "wade": ["waded", "wading"],
    "glide": ["glided", "gliding"],
    "hate": ["hated", "hating"],
    "create": ["created", "creating"],
    "state": ["stated", "stating"],
    "taste": ["tasted", "tasting"],
    "waste": ["wasted", "wasting"],
    "note": ["noted", "noting"],
    "vote": ["voted", "voting"],
    "invite": ["invited", "inviting"],
    "decide": ["decided", "deciding"],
    "provide": ["provided", "providing"],
    "guide": ["guided", "guiding"],
    "rule": ["ruled", "ruling"],
    "file": ["filed", "filing"],
    "pile": ["piled", "piling"],
    "settle": ["settled", "settling"],
    "juggle": ["juggled", "juggling"],
    "giggle": ["giggled", "giggling"],
    "struggle": ["struggled", "struggling"],
    "paddle": ["paddled", "paddling"],
    "cycle": ["cycled", "cycling"],
    "shape": ["shaped", "shaping"],
    "wipe": ["wiped", "wiping"],
    "escape": ["escaped", "escaping"],
    "type": ["typed", "typing"],
    "change": ["changed", "changing"],
    "arrange": ["arranged", "arranging"],
    "charge": ["charged", "charging"],
    "manage": ["managed", "managing"],
    "bounce": ["bounced", "bouncing"],
    "slice": ["sliced", "slicing"],
    "practice": ["practiced", "practicing"],
    "celebrate": ["celebrated", "celebrating"],
    "exercise": ["exercised", "exercising"],
    "balance": ["balanced", "balancing"],
    "pose": ["posed", "posing"],
    "smash": ["smashed"],
    "carve": ["carved", "carving"],
    "wash": ["washed"],
    "man": ["men"],
    "woman": ["women"],
    "child": ["children"],
    "foot": ["feet"],
    "tooth": ["teeth"],
    "goose": ["geese"],
    "mouse": ["mice"],
    "wolf": ["wolves"],
    "knife": ["knives"],
    "leaf": ["leaves"],
    "life": ["lives"],
    "loaf": ["loaves"],
    "shelf": ["shelves"],
    "thief": ["thieves"],
    "wife": ["wives"],
    "half": ["halves"],
    "calf": ["calves"],
    "scarf": ["scarves"],
    "potato": ["potatoes"],
    "tomato": ["tomatoes"],
    "hero": ["heroes"],
    "echo": ["echoes"],
    "shoe": ["shoes"],
    "bus": ["buses"],
    "gas": ["gases"],
    "person": ["persons"],
}

# Words the suffix rules would mangle; map to themselves.
PROTECTED = [
    "this", "his", "hers", "its", "as", "us", "yes", "plus", "thus",
    "perhaps", "always", "towards", "besides", "news", "series", "species",
    "tennis", "chaos", "focus", "bonus", "canvas", "circus", "campus",
    "pants", "clothes", "people", "police", "morning", "evening",
    "something", "nothing", "anything", "everything", "wedding", "ceiling",
    "during", "spring", "string", "darling", "dumpling", "sibling",
    "lens", "analysis", "basis", "iris", "axis", "bus", "gas", "speed",
    "indeed",
]


def nouns():
    return """
    dog cat frisbee boy girl man woman child guy teenager person kid baby
    family friend neighbor crowd group team player coach officer worker
    farmer rider swimmer runner surfer skier singer dancer artist cook
    canoe lake shore rainbow grass field park ball stick tree air wind
    trailer shirt side road street sidewalk car truck bike bicycle horse
    beach sand wave ocean sea river mountain hill trail snow ice board
    kitchen table chair bench bowl plate cup glass knife fork spoon pan
    food meal dinner breakfast lunch pizza cake bread cheese apple banana
    fruit salad soup coffee tea water milk juice bottle basket bag hat cap
    coat jacket dress shoe boot sock glove scarf helmet city town village
    house home door window wall roof floor room bed couch sofa lamp light
    book paper pen pencil phone camera picture photo music guitar piano
    drum song band stage audience bird fish duck cow sheep goat pig chicken
    lion tiger bear elephant monkey rabbit mouse snake squirrel garden
    flower plant leaf branch rock stone sun moon star sky cloud rain storm
    fire smoke fence gate bridge boat ship sail paddle oar dock pier wood
    forest path market store shop counter shelf box toy kite balloon rope
    wheel engine train plane airport station bus taxi motorcycle ladder
    yard pool wagon sled surfboard snowboard net goal court track gym race
    game crayon chalk brush towel blanket pillow mirror clock wallet key
    mom dad mother father brother sister son daughter grandmother uncle
    hand arm leg head face eye ear nose mouth hair back shoulder finger
    foot tooth goose wolf life loaf thief wife half calf potato tomato
    hero echo gas person lens morning evening wedding ceiling spring
    string sibling news series tennis pants clothes police people
    trash can bin bucket shovel rake hose mud puddle leash collar bone
    nest egg feather wing tail paw fur seed root stem thorn berry vine
    hay barn tractor plow crop corn wheat winter summer autumn night day
    noon midnight week month year hour minute second moment time place
    thing way lot edge corner middle center top bottom front end start
    line row circle square triangle shape color
    """.split()


def verbs():
    return """
    be have do go get make take give throw catch run walk jump leap sit
    stand climb swim dive ride drive fly play eat drink cook bake cut chop
    wash clean open close push pull lift carry hold drop pick put set
    place move turn spin roll slide skate ski surf paddle row sail fish
    hunt chase follow lead watch look see stare gaze point wave smile
    laugh cry shout yell talk speak say tell ask answer call sing dance
    listen hear read write draw paint build fix repair break kick hit
    strike toss pitch serve bounce dribble shoot score win lose race jog
    sprint stretch bend reach grab touch feed pet brush comb wear tie zip
    park stop start begin finish end wait stay leave arrive enter exit
    cross pass meet join gather help teach learn study work rest sleep
    wake dream think know remember forget want need love like enjoy try
    practice train exercise expect fetch celebrate prepare slice pour stir
    mix boil fry grill taste smell shine blow splash float sink land
    launch hop skip flip clap nod wink crawl kneel squat balance juggle
    giggle whisper hum whistle cheer applaud wander stroll hike trek
    gallop trot swing hang dig bury plant water weed rake mow trim snap
    share save use add agree die lie smash pose glide wade trade settle
    struggle cycle shape wipe escape type change arrange charge manage
    bring buy pay find lose keep send spend deal mean seek steal
    understand free hope hate create state note vote invite decide
    provide guide rule file pile choose freeze rise fall become come
    hide bite tear sweep weep sting stick spring sting spin light lend
    flee feel sell win fold wrap hug kiss greet visit
    """.split()


def build():
    exceptions = dict(_expand(IRREGULAR))
    for w in PROTECTED:
        exceptions.setdefault(w, w)

    pos = {}
    for n in nouns():
        pos.setdefault(n, set()).add("NOUN")
    for v in verbs():
        pos.setdefault(v, set()).add("VERB")

    lexicon = {
        "exceptions": dict(sorted(exceptions.items())),
        "suffix_rules": SUFFIX_RULES,
        "pos_lexicon": {k: sorted(v) for k, v in sorted(pos.items())},
    }
    OUT.write_text(json.dumps(lexicon, indent=1, sort_keys=True) + "\n")
    print(f"wrote {OUT} ({len(exceptions)} exceptions, {len(pos)} pos entries)")


if __name__ == "__main__":
    build()
