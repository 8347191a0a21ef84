#!/usr/bin/env python3
"""Regenerate the bundled lexicon data files under revjudge/textmetrics/data/.

The word inventory is hand-curated; this script expands morphology (plurals,
verb inflections) and assigns synthetic Zipf-style frequency weights by band,
then writes dictionary.txt, taglex.tsv, wordfreq.tsv, subordinators.txt,
connectives.txt, grammar_rules.tsv and specificity_weights.tsv. Run from the
repo root:  python3 tools/build_lexicon_data.py
"""

import hashlib
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "revjudge" / "textmetrics" / "data"

# tag, band, flags. Bands: 1 function-word frequencies, 2 very common,
# 3 common, 4 less common / technical. Flags: U uncountable noun,
# D final-consonant doubling verb, E keep-e verb.
DETS = "the a an this that these those my your our their its his her some any no every each either neither another such one two three four five six seven eight nine ten first second third last next few many several most all both half".split()
PRONOUNS = "i you he she it we they me him us them mine yours ours theirs myself yourself himself herself itself ourselves themselves who whom whose which what someone anyone everyone nobody something anything everything nothing".split()
PREPS = "of in on at by for with from to into onto about over under between among through during before after against without within along across behind beyond near off around upon toward towards despite per via".split()
CONJS = "and or but nor so yet".split()
SUBORDINATORS = "because although though since while if unless whereas until when whenever where wherever once whether lest provided".split()
AUX = "is are was were be been being am do does did done have has had will would can could shall should may might must".split()
ADVS = "not very also too often never always sometimes usually really quite rather almost nearly just only even still already soon now then here there together apart instead moreover however therefore furthermore meanwhile nevertheless nonetheless finally firstly secondly clearly obviously probably perhaps maybe especially particularly significantly increasingly mostly largely directly easily quickly slowly carefully properly effectively daily online early late well better worse today yesterday tomorrow".split()

NOUNS_COMMON = """person people student students teacher writer reader child children citizen worker family friend parent brother sister man woman men women group team society community world country city town school class university college essay paper draft sentence paragraph word letter message email text phone computer device screen network internet media technology communication conversation discussion argument claim idea point evidence reason example detail fact information knowledge skill habit behavior attitude opinion question answer problem solution effect cause change way manner method approach system process result outcome benefit advantage disadvantage risk cost value quality quantity number amount level degree time day week month year hour minute moment period age life experience event situation case matter issue topic subject area field part piece side aspect form kind type sort thing object item place home house room office building street road meeting plan goal purpose need use help support attention interest concern care trust respect freedom right law rule standard practice tradition culture language history science research study survey report article book story news source site page post comment review video game music art picture image face eye hand head heart mind body voice sound silence distance relationship connection bond contact access tool machine car train bus bike letter mail post office station market store shop money price job work task effort energy power strength force speed limit chance opportunity choice option decision action step move start end beginning middle future past present morning evening night weekend summer winter spring autumn water food meal coffee tea air fire earth nature environment weather rain snow sun moon star sky sea ocean river mountain tree flower grass garden park animal dog cat bird fish horse apple bread fruit vegetable health disease doctor hospital medicine mile meter inch foot pound dollar percent majority minority rest whole total average share portion half quarter third""".split()

NOUNS_TECH = """section equation variable function parameter model theory analysis experiment measurement observation hypothesis definition theorem proof lemma figure table chart graph dataset sample distribution probability statistic correlation regression algorithm computation simulation iteration convergence boundary condition constraint coefficient matrix vector dimension domain range interval sequence series sum product ratio fraction derivative integral approximation error accuracy precision estimate assumption derivation formulation notation term expression solution balance mass density temperature pressure velocity momentum energy particle wave field frequency amplitude phase spectrum signal noise sensor circuit voltage current resistance material structure surface layer region zone grid mesh node element network cluster module component framework architecture implementation interface protocol database server client software hardware code program script input output file format record entry index key reference citation appendix abstract introduction conclusion summary discussion literature methodology procedure criterion metric benchmark baseline threshold specificity revision improvement annotation label classifier feature weight score prediction performance recall evaluation training testing validation fold ensemble forest tree depth height branch leaf root""".split()

NOUNS_UNCOUNT = """advice progress homework feedback furniture luggage traffic evidence research money music weather news physics mathematics economics politics ethics linguistics statistics networking clarity fluency readability coherence cohesion grammar spelling punctuation vocabulary syntax semantics writing reading speaking listening understanding confidence patience courage honesty wisdom intelligence creativity curiosity motivation satisfaction happiness sadness anger fear love hate peace war poverty wealth safety security privacy equality justice education employment entertainment transportation pollution electricity software bandwidth storage""".split()

VERBS_REG = """change improve affect help connect support transform influence provide offer create develop increase decrease reduce expand extend enhance strengthen weaken clarify explain describe discuss argue claim state suggest propose recommend conclude summarize analyze examine explore investigate consider compare contrast evaluate assess measure count calculate compute estimate predict classify identify detect recognize notice observe record report note mention emphasize highlight focus concentrate depend rely relate refer apply use employ adopt adapt adjust modify revise edit correct fix repair solve resolve address handle manage organize arrange prepare plan design construct produce generate form shape define determine establish introduce present demonstrate show prove confirm verify validate test check review study learn practice train teach educate inform notify remind encourage motivate inspire persuade convince allow enable permit prevent avoid ignore reject accept agree disagree object protest complain praise criticize blame thank apologize greet welcome invite join participate contribute share exchange communicate interact respond reply answer ask request require need want wish hope expect believe doubt assume suppose imagine remember forget realize understand appreciate enjoy like love hate prefer miss wait stay remain continue stop start finish complete end follow lead guide direct move travel walk talk work live happen occur exist appear disappear seem look watch listen sound smell taste touch play open close turn push pull lift carry pick drop place fill empty cover discover mention visit call name save waste spend earn gain achieve reach attain obtain acquire receive deliver return remove add insert delete replace combine merge separate divide split attach connect disconnect install update upgrade download upload browse search click type print scan copy paste post text email chat film photograph paint draw dance sing cook clean wash dress rest relax exercise jump climb race hurry rain snow shine flow pour boil freeze melt burn explode collapse crash fail succeed improve worsen matter differ vary depend formulate solve derive compute converge iterate approximate integrate differentiate normalize optimize minimize maximize sample cluster label annotate tokenize parse train evaluate benchmark deploy serve host monitor log""".split()

VERBS_IRREG = {
    "be": ["be"], "say": ["say", "says", "said", "saying"],
    "go": ["go", "goes", "went", "gone", "going"],
    "get": ["get", "gets", "got", "gotten", "getting"],
    "make": ["make", "makes", "made", "making"],
    "know": ["know", "knows", "knew", "known", "knowing"],
    "think": ["think", "thinks", "thought", "thinking"],
    "take": ["take", "takes", "took", "taken", "taking"],
    "see": ["see", "sees", "saw", "seen", "seeing"],
    "come": ["come", "comes", "came", "coming"],
    "find": ["find", "finds", "found", "finding"],
    "give": ["give", "gives", "gave", "given", "giving"],
    "tell": ["tell", "tells", "told", "telling"],
    "become": ["become", "becomes", "became", "becoming"],
    "leave": ["leave", "leaves", "left", "leaving"],
    "feel": ["feel", "feels", "felt", "feeling"],
    "bring": ["bring", "brings", "brought", "bringing"],
    "begin": ["begin", "begins", "began", "begun", "beginning"],
    "keep": ["keep", "keeps", "kept", "keeping"],
    "hold": ["hold", "holds", "held", "holding"],
    "write": ["write", "writes", "wrote", "written", "writing"],
    "read": ["read", "reads", "reading"],
    "stand": ["stand", "stands", "stood", "standing"],
    "hear": ["hear", "hears", "heard", "hearing"],
    "let": ["let", "lets", "letting"],
    "mean": ["mean", "means", "meant", "meaning"],
    "set": ["set", "sets", "setting"],
    "meet": ["meet", "meets", "met", "meeting"],
    "run": ["run", "runs", "ran", "running"],
    "pay": ["pay", "pays", "paid", "paying"],
    "sit": ["sit", "sits", "sat", "sitting"],
    "speak": ["speak", "speaks", "spoke", "spoken", "speaking"],
    "lie": ["lie", "lies", "lay", "lain", "lying"],
    "lose": ["lose", "loses", "lost", "losing"],
    "send": ["send", "sends", "sent", "sending"],
    "build": ["build", "builds", "built", "building"],
    "fall": ["fall", "falls", "fell", "fallen", "falling"],
    "cut": ["cut", "cuts", "cutting"],
    "grow": ["grow", "grows", "grew", "grown", "growing"],
    "spend": ["spend", "spends", "spent", "spending"],
    "understand": ["understand", "understands", "understood", "understanding"],
    "buy": ["buy", "buys", "bought", "buying"],
    "put": ["put", "puts", "putting"],
    "choose": ["choose", "chooses", "chose", "chosen", "choosing"],
    "show": ["show", "shows", "showed", "shown", "showing"],
    "spell": ["spell", "spells", "spelled", "spelt", "spelling"],
    "lead": ["lead", "leads", "led", "leading"],
    "rise": ["rise", "rises", "rose", "risen", "rising"],
    "drive": ["drive", "drives", "drove", "driven", "driving"],
    "eat": ["eat", "eats", "ate", "eaten", "eating"],
    "draw": ["draw", "draws", "drew", "drawn", "drawing"],
    "teach": ["teach", "teaches", "taught", "teaching"],
}

ADJS = """good bad great small large big little young old new recent early late long short high low wide narrow deep shallow heavy light strong weak fast slow quick easy hard difficult simple complex complicated clear unclear vague precise specific general particular common rare frequent occasional regular irregular normal unusual typical strange important unimportant significant minor major main central local global national international public private personal social cultural political economic academic scientific technical technological digital electronic online offline modern traditional classic current previous former future possible impossible likely unlikely certain uncertain true false real actual virtual correct incorrect right wrong accurate inaccurate exact approximate whole entire complete incomplete full empty open closed free busy available ready useful useless helpful harmful effective ineffective efficient inefficient convenient inconvenient comfortable uncomfortable safe dangerous healthy unhealthy happy unhappy sad angry afraid proud ashamed grateful friendly unfriendly polite rude kind cruel honest dishonest fair unfair reasonable unreasonable sensible silly serious funny interesting boring exciting dull attractive beautiful ugly pleasant unpleasant quiet loud noisy silent calm nervous anxious relaxed tired energetic active passive positive negative optimistic pessimistic confident shy creative logical rational emotional physical mental verbal written spoken formal informal direct indirect obvious subtle visible invisible similar different equal unequal separate joint single double multiple various numerous enough sufficient insufficient necessary unnecessary essential optional basic advanced elementary fundamental primary secondary original final initial additional extra further numerical analytical theoretical empirical experimental statistical linear nonlinear discrete continuous finite infinite stable unstable robust fragile optimal minimal maximal proper improper valid invalid consistent inconsistent expensive cheap costly affordable rich poor fluent grammatical ungrammatical readable coherent concise verbose redundant relevant irrelevant better worse best worst larger smaller longer shorter higher lower stronger weaker easier harder clearer simpler""".split()

NUMERALS = "zero eleven twelve twenty thirty forty fifty sixty seventy eighty ninety hundred thousand million billion".split()

INTERJ = "yes no okay hello hi bye please thanks".split()

CONNECTIVES = """however therefore moreover furthermore nevertheless nonetheless meanwhile consequently additionally similarly likewise conversely instead otherwise thus hence also finally first second third next then overall besides indeed accordingly""".split()

BAND = {1: 7.0, 2: 5.8, 3: 4.7, 4: 3.6}


def jitter(word, base):
    h = int(hashlib.md5(word.encode()).hexdigest()[:6], 16)
    return round(base - (h % 60) / 100.0, 3)


def plural(noun):
    if noun.endswith(("s", "x", "z", "ch", "sh")):
        return noun + "es"
    if noun.endswith("y") and noun[-2] not in "aeiou":
        return noun[:-1] + "ies"
    if noun.endswith("f"):
        return noun[:-1] + "ves"
    if noun.endswith("fe"):
        return noun[:-2] + "ves"
    return noun + "s"


DOUBLE = {"stop", "plan", "drop", "fit", "chat", "jog", "rob", "grab", "swim", "refer", "occur", "permit", "regret", "admit", "submit", "commit", "prefer", "jump"}


def verb_forms(v):
    forms = {v}
    if v.endswith(("s", "x", "z", "ch", "sh")):
        forms.add(v + "es")
    elif v.endswith("y") and v[-2] not in "aeiou":
        forms.add(v[:-1] + "ies")
    else:
        forms.add(v + "s")
    if v.endswith("e") and not v.endswith("ee"):
        stem = v[:-1]
        forms.add(v + "d")
        forms.add(stem + "ing")
    elif v.endswith("y") and v[-2] not in "aeiou":
        forms.add(v[:-1] + "ied")
        forms.add(v + "ing")
    elif v in DOUBLE:
        forms.add(v + v[-1] + "ed")
        forms.add(v + v[-1] + "ing")
    else:
        forms.add(v + "ed")
        forms.add(v + "ing")
    return sorted(forms)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    tagged = []  # (form, tag, zipf)

    def add(form, tag, band):
        tagged.append((form, tag, jitter(form, BAND[band])))

    for w in DETS:
        add(w, "det", 1)
    for w in PRONOUNS:
        add(w, "pron", 1)
    for w in PREPS:
        add(w, "prep", 1)
    for w in CONJS:
        add(w, "conj", 1)
    for w in SUBORDINATORS:
        add(w, "sub", 1)
    for w in AUX:
        add(w, "aux", 1)
    for w in ADVS:
        add(w, "adv", 2)
    for w in INTERJ:
        add(w, "intj", 2)
    for w in NUMERALS:
        add(w, "num", 2)
    for w in CONNECTIVES:
        add(w, "adv", 2)

    for w in NOUNS_COMMON:
        add(w, "noun", 2)
        add(plural(w), "noun", 3)
    for w in NOUNS_TECH:
        add(w, "noun", 4)
        add(plural(w), "noun", 4)
    for w in NOUNS_UNCOUNT:
        add(w, "noun", 3)

    for v in VERBS_REG:
        for i, f in enumerate(verb_forms(v)):
            add(f, "verb", 3 if i == 0 else 4)
    for forms in VERBS_IRREG.values():
        for f in forms:
            add(f, "verb", 2)

    for w in ADJS:
        add(w, "adj", 3)

    # deduplicate: first tag wins (function words beat later content tags)
    seen = {}
    for form, tag, z in tagged:
        if form not in seen:
            seen[form] = (tag, z)

    forms = sorted(seen)
    (OUT / "dictionary.txt").write_text("\n".join(forms) + "\n", encoding="utf-8")
    (OUT / "taglex.tsv").write_text(
        "\n".join(f"{f}\t{seen[f][0]}" for f in forms) + "\n", encoding="utf-8")
    (OUT / "wordfreq.tsv").write_text(
        "\n".join(f"{f}\t{seen[f][1]}" for f in forms) + "\n", encoding="utf-8")
    (OUT / "subordinators.txt").write_text(
        "\n".join(sorted(set(SUBORDINATORS) | {"which", "who", "whom", "whose"})) + "\n",
        encoding="utf-8")
    (OUT / "connectives.txt").write_text("\n".join(sorted(set(CONNECTIVES))) + "\n", encoding="utf-8")

    (OUT / "grammar_rules.tsv").write_text(
        "a_an\tvowels=aeiou\tIndefinite article agreement (a apple / an book)\n"
        "double_word\t-\tDuplicated adjacent word (the the)\n"
        "initial_lowercase\t-\tSentence starts with a lowercase word\n"
        "sv_number\tdets=a,an,one,this,each,every\tSingular determiner + noun followed by a base-form verb\n"
        "unmatched_pair\tpairs=()[]\tUnbalanced brackets or double quotes\n",
        encoding="utf-8")

    (OUT / "specificity_weights.tsv").write_text(
        "bias\t-1.40\n"
        "token_count\t1.10\n"
        "numeral_count\t1.60\n"
        "cap_count\t0.80\n"
        "mean_idf\t1.30\n"
        "connective_count\t-0.30\n",
        encoding="utf-8")

    print(f"wrote {len(forms)} forms to {OUT}")


if __name__ == "__main__":
    main()
