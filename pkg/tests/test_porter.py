from radsum.porter import porter_stem


def test_plural_stripping():
    assert porter_stem("caresses") == "caress"


def test_short_word_untouched():
    assert porter_stem("sky") == "sky"


def test_derivational_chain():
    assert porter_stem("relational") == "relat"


def test_lowercases_input():
    assert porter_stem("Effusions") == porter_stem("effusions") == "effus"


def test_classic_examples():
    cases = {
        "ponies": "poni",
        "plastered": "plaster",
        "motoring": "motor",
        "hopping": "hop",
        "falling": "fall",
        "conditional": "condit",
        "vietnamization": "vietnam",
        "triplicate": "triplic",
        "hopeful": "hope",
        "goodness": "good",
        "adjustable": "adjust",
        "controlling": "control",
        "effusion": "effus",
    }
    for word, expected in cases.items():
        assert porter_stem(word) == expected, word


def test_oracle_vectors_all_pass(porter_vectors):
    failures = [
        (word, expected, porter_stem(word))
        for word, expected in porter_vectors
        if porter_stem(word) != expected
    ]
    assert not failures, failures[:10]


def test_idempotent_on_vector_outputs(porter_vectors):
    stems = {stem for _, stem in porter_vectors}
    assert all(porter_stem(s) == s for s in stems)
