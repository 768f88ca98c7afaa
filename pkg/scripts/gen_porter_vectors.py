#!/usr/bin/env python3
"""Generate the Porter stemmer regression vector file.

Uses an independent oracle: a direct port of the canonical buffer/index
style reference implementation (public domain, Martin Porter's C version as
ported by Vivake Gupta). The shipped stemmer in radsum.porter is a separate
string-slice implementation; this script is the other side of the dual
route and must stay independent of it.

The vocabulary is synthetic: a crossing of common/clinical roots with
inflectional and derivational suffixes, plus seeded pseudo-words, so every
rule family in steps 1a-5b is exercised. Output format: one "word stem"
pair per line.

Usage: python scripts/gen_porter_vectors.py > tests/fixtures/porter_vectors.txt
"""

import itertools
import random
import string
import sys


class OraclePorter:
    """Canonical buffer/index reference implementation."""

    def __init__(self):
        self.b = ""
        self.k = 0
        self.k0 = 0
        self.j = 0

    def cons(self, i):
        if self.b[i] in "aeiou":
            return 0
        if self.b[i] == "y":
            if i == self.k0:
                return 1
            return not self.cons(i - 1)
        return 1

    def m(self):
        n = 0
        i = self.k0
        while True:
            if i > self.j:
                return n
            if not self.cons(i):
                break
            i += 1
        i += 1
        while True:
            while True:
                if i > self.j:
                    return n
                if self.cons(i):
                    break
                i += 1
            i += 1
            n += 1
            while True:
                if i > self.j:
                    return n
                if not self.cons(i):
                    break
                i += 1
            i += 1

    def vowelinstem(self):
        for i in range(self.k0, self.j + 1):
            if not self.cons(i):
                return 1
        return 0

    def doublec(self, j):
        if j < (self.k0 + 1):
            return 0
        if self.b[j] != self.b[j - 1]:
            return 0
        return self.cons(j)

    def cvc(self, i):
        if (
            i < (self.k0 + 2)
            or not self.cons(i)
            or self.cons(i - 1)
            or not self.cons(i - 2)
        ):
            return 0
        if self.b[i] in "wxy":
            return 0
        return 1

    def ends(self, s):
        length = len(s)
        if s[-1] != self.b[self.k]:
            return 0
        if length > (self.k - self.k0 + 1):
            return 0
        if self.b[self.k - length + 1 : self.k + 1] != s:
            return 0
        self.j = self.k - length
        return 1

    def setto(self, s):
        length = len(s)
        self.b = self.b[: self.j + 1] + s + self.b[self.j + length + 1 :]
        self.k = self.j + length

    def r(self, s):
        if self.m() > 0:
            self.setto(s)

    def step1ab(self):
        if self.b[self.k] == "s":
            if self.ends("sses"):
                self.k -= 2
            elif self.ends("ies"):
                self.setto("i")
            elif self.b[self.k - 1] != "s":
                self.k -= 1
        if self.ends("eed"):
            if self.m() > 0:
                self.k -= 1
        elif (self.ends("ed") or self.ends("ing")) and self.vowelinstem():
            self.k = self.j
            if self.ends("at"):
                self.setto("ate")
            elif self.ends("bl"):
                self.setto("ble")
            elif self.ends("iz"):
                self.setto("ize")
            elif self.doublec(self.k):
                self.k -= 1
                if self.b[self.k] in "lsz":
                    self.k += 1
            elif self.m() == 1 and self.cvc(self.k):
                self.setto("e")

    def step1c(self):
        if self.ends("y") and self.vowelinstem():
            self.b = self.b[: self.k] + "i" + self.b[self.k + 1 :]

    def step2(self):
        if self.b[self.k - 1] == "a":
            if self.ends("ational"):
                self.r("ate")
            elif self.ends("tional"):
                self.r("tion")
        elif self.b[self.k - 1] == "c":
            if self.ends("enci"):
                self.r("ence")
            elif self.ends("anci"):
                self.r("ance")
        elif self.b[self.k - 1] == "e":
            if self.ends("izer"):
                self.r("ize")
        elif self.b[self.k - 1] == "l":
            if self.ends("bli"):
                self.r("ble")
            elif self.ends("alli"):
                self.r("al")
            elif self.ends("entli"):
                self.r("ent")
            elif self.ends("eli"):
                self.r("e")
            elif self.ends("ousli"):
                self.r("ous")
        elif self.b[self.k - 1] == "o":
            if self.ends("ization"):
                self.r("ize")
            elif self.ends("ation"):
                self.r("ate")
            elif self.ends("ator"):
                self.r("ate")
        elif self.b[self.k - 1] == "s":
            if self.ends("alism"):
                self.r("al")
            elif self.ends("iveness"):
                self.r("ive")
            elif self.ends("fulness"):
                self.r("ful")
            elif self.ends("ousness"):
                self.r("ous")
        elif self.b[self.k - 1] == "t":
            if self.ends("aliti"):
                self.r("al")
            elif self.ends("iviti"):
                self.r("ive")
            elif self.ends("biliti"):
                self.r("ble")
        elif self.b[self.k - 1] == "g":
            if self.ends("logi"):
                self.r("log")

    def step3(self):
        if self.b[self.k] == "e":
            if self.ends("icate"):
                self.r("ic")
            elif self.ends("ative"):
                self.r("")
            elif self.ends("alize"):
                self.r("al")
        elif self.b[self.k] == "i":
            if self.ends("iciti"):
                self.r("ic")
        elif self.b[self.k] == "l":
            if self.ends("ical"):
                self.r("ic")
            elif self.ends("ful"):
                self.r("")
        elif self.b[self.k] == "s":
            if self.ends("ness"):
                self.r("")

    def step4(self):
        if self.b[self.k - 1] == "a":
            if not self.ends("al"):
                return
        elif self.b[self.k - 1] == "c":
            if not (self.ends("ance") or self.ends("ence")):
                return
        elif self.b[self.k - 1] == "e":
            if not self.ends("er"):
                return
        elif self.b[self.k - 1] == "i":
            if not self.ends("ic"):
                return
        elif self.b[self.k - 1] == "l":
            if not (self.ends("able") or self.ends("ible")):
                return
        elif self.b[self.k - 1] == "n":
            if not (
                self.ends("ant")
                or self.ends("ement")
                or self.ends("ment")
                or self.ends("ent")
            ):
                return
        elif self.b[self.k - 1] == "o":
            if not (
                (self.ends("ion") and self.b[self.j] in "st") or self.ends("ou")
            ):
                return
        elif self.b[self.k - 1] == "s":
            if not self.ends("ism"):
                return
        elif self.b[self.k - 1] == "t":
            if not (self.ends("ate") or self.ends("iti")):
                return
        elif self.b[self.k - 1] == "u":
            if not self.ends("ous"):
                return
        elif self.b[self.k - 1] == "v":
            if not self.ends("ive"):
                return
        elif self.b[self.k - 1] == "z":
            if not self.ends("ize"):
                return
        else:
            return
        if self.m() > 1:
            self.k = self.j

    def step5(self):
        self.j = self.k
        if self.b[self.k] == "e":
            a = self.m()
            if a > 1 or (a == 1 and not self.cvc(self.k - 1)):
                self.k -= 1
        if self.b[self.k] == "l" and self.doublec(self.k) and self.m() > 1:
            self.k -= 1

    def stem(self, word):
        self.b = word
        self.k = len(word) - 1
        self.k0 = 0
        if self.k <= self.k0 + 1:
            return self.b
        self.step1ab()
        self.step1c()
        self.step2()
        self.step3()
        self.step4()
        self.step5()
        return self.b[self.k0 : self.k + 1]


ROOTS = """
abandon absorb accept access account accumulate ache acid act adapt adhere
adjust admit adopt advance advise aerate affect agree aid align allocate
allow alter analyze anchor angle appear apply approve argue arise arrange
arrest assess assign assist assume atrophy attach attend avoid awake base
bend bind bleed blend block blur border bound breathe bridge broaden
calcify calm capture care caress cause cease center change charge check
chill circulate claim classify clean clear close cloud cluster coat
collapse collect combine comfort commit compare compensate complete
complicate compress conclude condense conduct confirm confuse congest
connect consider consolidate constrict construct consult contain continue
contract contribute control convert convey correct correlate cough cover
create cross cure damage decide decline decrease deduce defend define
deflate deform degenerate degrade delay demonstrate denote deny depend
depict deposit depress derive describe designate detect determine develop
deviate devise diagnose dictate differ diffuse digest dilate dilute
diminish direct discharge disclose discover discuss dislocate dispense
displace dissect dissolve distend distort distribute disturb divide
document dominate drain dress drift drop dull ease edematous effuse
elevate eliminate elongate embed emerge emphasize enable enclose engage
enhance enlarge ensure enter erode establish estimate evaluate evolve
examine exceed exclude exert exhale exist expand expect expire explain
explore expose express extend extract fade fail fasten favor feed fibrose
fill filter fix flatten flex float flow fluctuate focus fold follow force
form fracture fragment frame free fuse generalize generate grade graduate
grant group grow guard guide handle harden heal help hold hope hydrate
identify illuminate image immobilize impair implant imply improve incise
include increase indicate infect infer infiltrate inflame inflate inform
inhale inject injure insert inspect inspire install instruct integrate
intend intensify interpret intervene introduce invade invert investigate
involve irradiate irritate isolate issue join judge justify keep label
lead lean level limit line link list locate lodge lower maintain manage
mark mask measure mediate mention merge migrate mineralize mix moderate
modify monitor motivate move name narrow normalize note notice obliterate
obscure observe obstruct obtain occlude occupy occur open operate oppose
order organize orient originate ossify outline overlap oxygenate pace
palpate pass pause penetrate perceive perforate perform persist pinch
place plan please point position possess precede predict prefer prepare
present preserve press prevent probe proceed process produce progress
project prolong promote propose protect prove provide puncture pursue
radiate raise reach react receive recognize recommend record recover
reduce refer refine reflect regard register regress regulate reinforce
relate relax release relieve remain remark remove render repair repeat
replace report represent request require resect resolve respond restore
restrict result retain retract reveal reverse review revise rotate
saturate scan scar schedule sclerose screen seal secure sedate segment
select sense separate settle shade shadow share sharpen shift show
shrink signify simplify site size soften solve space specify splint
spread stabilize stage stain state stay stenose stiffen stimulate
straighten stress stretch strike structure study subside suggest supply
support suppress surround suspect suspend sustain suture swell tense
test thicken thin tolerate trace track transfer transform transmit
transplant treat trend trim twist ulcerate underline undergo unify
update use vaccinate validate value vary ventilate verify viral visual
void widen worsen wrap
""".split()

SUFFIXES = [
    "", "s", "es", "ed", "ing", "ings", "er", "ers", "est", "ly",
    "ness", "fulness", "ousness", "iveness", "ment", "ments", "ement",
    "ion", "ions", "ation", "ations", "ational", "ization", "izations",
    "izer", "ize", "ized", "izing", "al", "ally", "alli", "aliti",
    "ality", "alism", "alize", "ible", "able", "ably", "ance", "ence",
    "enci", "anci", "ant", "ent", "ently", "entli", "ousli", "ously",
    "ous", "ive", "ivity", "iviti", "ity", "iti", "biliti", "bility",
    "ical", "icate", "iciti", "ative", "ful", "tional", "tionally",
    "ator", "y", "ies", "ied", "eed", "ator", "ors", "ist", "ists",
]

CLASSIC = """
caresses ponies ties caress cats feed agreed plastered bled motoring sing
conflated troubled sized hopping tanned falling hissing fizzed failing
filing happy sky relational conditional rational valenci hesitanci
digitizer conformabli radicalli differentli vileli analogousli vietnamization
predication operator feudalism decisiveness hopefulness callousness
formaliti sensitiviti sensibiliti triplicate formative formalize
electriciti electrical hopeful goodness revival allowance inference
airliner gyroscopic adjustable defensible irritant replacement adjustment
dependent adoption homologou communism activate angulariti homologous
effective bowdlerize probate rate cease controll roll controlling dying
lying tying dies die agrees skies sky news innings inning outing canning
proceed exceed succeed generalization generalizations oscillators
oscillator knightly knights knight abnormality abnormalities effusion
effusions pneumonia pneumonias cardiopulmonary cardiomegaly atelectasis
consolidation consolidations infiltrates infiltrate opacity opacities
granuloma granulomas degenerative osteophytes costophrenic bibasilar
""".split()


def pseudo_words(n, seed=20240823):
    rng = random.Random(seed)
    onsets = ["b", "c", "d", "f", "g", "h", "j", "k", "l", "m", "n", "p",
              "r", "s", "t", "v", "w", "y", "z", "bl", "br", "ch", "cl",
              "cr", "dr", "fl", "fr", "gl", "gr", "pl", "pr", "sc", "sh",
              "sk", "sl", "sm", "sn", "sp", "st", "str", "sw", "th", "tr"]
    nuclei = ["a", "e", "i", "o", "u", "ai", "ea", "ee", "ie", "oa", "oo",
              "ou", "y"]
    codas = ["", "b", "ck", "d", "f", "g", "l", "ll", "m", "n", "nd", "ng",
             "nk", "nt", "p", "r", "rd", "rk", "rm", "rn", "rt", "s", "ss",
             "st", "t", "tt", "x", "z", "zz"]
    words = set()
    while len(words) < n:
        syllables = rng.randint(1, 3)
        w = "".join(
            rng.choice(onsets) + rng.choice(nuclei) + rng.choice(codas)
            for _ in range(syllables)
        )
        if 2 <= len(w) <= 18:
            words.add(w)
    return sorted(words)


def main():
    oracle = OraclePorter()
    vocab = set(CLASSIC)
    for root, suffix in itertools.product(ROOTS, SUFFIXES):
        vocab.add(root + suffix)
    vocab.update(pseudo_words(9000))
    vocab.update(string.ascii_lowercase)
    vocab = sorted(w for w in vocab if w and all(c in string.ascii_lowercase for c in w))
    for word in vocab:
        stemmed = oracle.stem(word)
        # Keep the vector set closed under stemming: synthetic junctions like
        # root+"eed" produce stems the algorithm would reduce again; drop them.
        if oracle.stem(stemmed) != stemmed:
            continue
        sys.stdout.write(f"{word} {stemmed}\n")
    sys.stderr.write(f"{len(vocab)} vectors\n")


if __name__ == "__main__":
    main()
