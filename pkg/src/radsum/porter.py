"""Porter suffix-stripping stemmer.

Implements the classic algorithm (steps 1a through 5b) in the canonical
reference variant, i.e. with the author's small departures from the 1980
article: the "bli" -> "ble" and "logi" -> "log" rules in step 2, and words
of length <= 2 left untouched.

The implementation here works on string slices and ordered rule tables; the
regression vectors in tests/fixtures/porter_vectors.txt were produced by an
independent buffer/index-style port (see scripts/gen_porter_vectors.py).
"""

_VOWELS = frozenset("aeiou")


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        # y is a consonant at the start, a vowel after a consonant.
        return True if i == 0 else not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of vowel-consonant sequences ([C](VC)^m[V])."""
    m = 0
    prev_cons = True
    started = False
    for i in range(len(stem)):
        cons = _is_consonant(stem, i)
        if started and cons and not prev_cons:
            m += 1
        if not cons:
            started = True
        prev_cons = cons
    return m


def _contains_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _cvc_at(word: str, i: int) -> bool:
    """Consonant-vowel-consonant ending at index i, last consonant not w/x/y."""
    if i < 2:
        return False
    if not (
        _is_consonant(word, i)
        and not _is_consonant(word, i - 1)
        and _is_consonant(word, i - 2)
    ):
        return False
    return word[i] not in "wxy"


def _apply_first(word: str, rules) -> str:
    """Replace the first matching suffix if the stem has positive measure.

    Once a suffix matches, no further rule in the step is attempted, whether
    or not the measure condition holds.
    """
    for suffix, replacement in rules:
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if _measure(stem) > 0:
                return stem + replacement
            return word
    return word


_STEP2_RULES = (
    ("ational", "ate"),
    ("tional", "tion"),
    ("enci", "ence"),
    ("anci", "ance"),
    ("izer", "ize"),
    ("bli", "ble"),
    ("alli", "al"),
    ("entli", "ent"),
    ("eli", "e"),
    ("ousli", "ous"),
    ("ization", "ize"),
    ("ation", "ate"),
    ("ator", "ate"),
    ("alism", "al"),
    ("iveness", "ive"),
    ("fulness", "ful"),
    ("ousness", "ous"),
    ("aliti", "al"),
    ("iviti", "ive"),
    ("biliti", "ble"),
    ("logi", "log"),
)

_STEP3_RULES = (
    ("icate", "ic"),
    ("ative", ""),
    ("alize", "al"),
    ("iciti", "ic"),
    ("ical", "ic"),
    ("ful", ""),
    ("ness", ""),
)

# Ordered so that longer suffixes shadow their own endings (ement > ment > ent).
_STEP4_SUFFIXES = (
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant",
    "ement", "ment", "ent", "ion", "ou", "ism", "ate", "iti",
    "ous", "ive", "ize",
)


def _step1a(word: str) -> str:
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies"):
        return word[:-2]
    if word.endswith("s") and not word.endswith("ss"):
        return word[:-1]
    return word


def _step1b(word: str) -> str:
    if word.endswith("eed"):
        if _measure(word[:-3]) > 0:
            return word[:-1]
        return word
    if word.endswith("ed") and _contains_vowel(word[:-2]):
        stem = word[:-2]
    elif word.endswith("ing") and _contains_vowel(word[:-3]):
        stem = word[:-3]
    else:
        return word
    if stem.endswith(("at", "bl", "iz")):
        return stem + "e"
    if _ends_double_consonant(stem) and stem[-1] not in "lsz":
        return stem[:-1]
    if _measure(stem) == 1 and _cvc_at(stem, len(stem) - 1):
        return stem + "e"
    return stem


def _step1c(word: str) -> str:
    if word.endswith("y") and _contains_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


def _step4(word: str) -> str:
    for suffix in _STEP4_SUFFIXES:
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if _measure(stem) > 1:
                if suffix == "ion" and (not stem or stem[-1] not in "st"):
                    return word
                return stem
            return word
    return word


def _step5(word: str) -> str:
    measure_at_entry = _measure(word)
    if word.endswith("e"):
        a = measure_at_entry
        if a > 1 or (a == 1 and not _cvc_at(word, len(word) - 2)):
            word = word[:-1]
    # The l-rule measures the step-5 entry word, matching the reference code.
    if word.endswith("l") and _ends_double_consonant(word) and measure_at_entry > 1:
        word = word[:-1]
    return word


def porter_stem(token: str) -> str:
    """Stem a single lowercase-able word token."""
    word = token.lower()
    if len(word) <= 2:
        return word
    word = _step1a(word)
    word = _step1b(word)
    word = _step1c(word)
    word = _apply_first(word, _STEP2_RULES)
    word = _apply_first(word, _STEP3_RULES)
    word = _step4(word)
    word = _step5(word)
    return word
