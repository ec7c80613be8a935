import json

import pytest
from hypothesis import given, strategies as st

from chaoskey.errors import EmptyKey, KeyTooLong
from chaoskey.kgm import (ABSENT, ALPHABET, DEFAULT_SEED, SIZE, build_matrix, first_key,
                          lookup)

REF_SECRET = "POLY12@+αμ"


@pytest.fixture(scope="module")
def m():
    return build_matrix()


def brute_force_lookup(m, c, layer):
    for i in range(SIZE):
        for j in range(SIZE):
            if m.cell(i, j, layer) == c:
                return f"{i}{j}{m.cell(i, j, (layer + 1) % SIZE)}"
    return "000"


def test_default_seed_value():
    assert DEFAULT_SEED == 0x0003D4C3B2A10001


def test_alphabet_composition():
    assert len(ALPHABET) == 81 == len(set(ALPHABET))
    assert ALPHABET.startswith("ABC")
    for c in "az09,._@+-=#!αβκ":
        assert c in ALPHABET
    assert "λ" not in ALPHABET and "μ" not in ALPHABET


def test_deterministic():
    assert build_matrix(7) == build_matrix(7)
    assert build_matrix() == build_matrix(DEFAULT_SEED)


def test_seeds_differ():
    a, b = build_matrix(1), build_matrix(2)
    assert any(a.cell(i, j, k) != b.cell(i, j, k)
               for i in range(9) for j in range(9) for k in range(9))


def test_layers_have_no_duplicates_and_full_alphabet(m):
    for k in range(SIZE):
        cells = [m.cell(i, j, k) for i in range(SIZE) for j in range(SIZE)]
        assert len(cells) == 81 == len(set(cells))
        assert set(ALPHABET) <= set(cells)
        assert all(len(c) == 1 and c.isprintable() for c in cells)


def test_short_alphabet_is_padded():
    small = build_matrix(3, alphabet="ABC")
    for k in range(SIZE):
        cells = {small.cell(i, j, k) for i in range(SIZE) for j in range(SIZE)}
        assert len(cells) == 81 and {"A", "B", "C"} <= cells


def test_lookup_matches_brute_force_scan(m):
    for layer in range(SIZE):
        for c in ALPHABET:
            assert lookup(c, layer, m) == brute_force_lookup(m, c, layer)


@pytest.mark.parametrize("c", ["μ", "ω", "?", " ", "\udc80", "Ж"])
def test_absent_character_is_000(m, c):
    for layer in range(SIZE):
        assert lookup(c, layer, m) == ABSENT


def test_origin_code(m):
    for layer in range(SIZE):
        c = m.cell(0, 0, layer)
        assert lookup(c, layer, m) == "00" + m.cell(0, 0, (layer + 1) % SIZE)


def test_lookup_rejects_bad_layer(m):
    with pytest.raises(ValueError):
        lookup("A", 9, m)


def test_reference_secret_shape(m):
    k1 = first_key(REF_SECRET, m)
    assert len(k1) == 30 and k1.source_len == 10
    assert k1.chars.endswith("000")  # mu is outside the alphabet
    assert k1.chars == "".join(lookup(c, f % 9, m) for f, c in enumerate(REF_SECRET))


def test_single_absent_character(m):
    assert first_key("?", m).chars == "000"


def test_first_key_errors(m):
    with pytest.raises(EmptyKey):
        first_key("", m)
    with pytest.raises(KeyTooLong):
        first_key("a" * 65, m)
    assert len(first_key("a" * 64, m)) == 192


@given(st.text(alphabet=st.sampled_from(ALPHABET + "?μé "), min_size=1, max_size=64))
def test_length_law(secret):
    m = build_matrix()
    assert len(first_key(secret, m)) == 3 * len(secret)


def test_layer_sensitivity(m):
    assert any(lookup(c, 0, m) != lookup(c, 1, m) for c in ALPHABET)


def test_first_key_bytes_are_unique_per_char(m):
    # Greek glyphs map into 0xB1.. and never alias an ASCII byte
    codes = {ord(c) & 0xFF for c in ALPHABET}
    assert len(codes) == len(ALPHABET)


def test_json_dump_shape(m):
    dump = json.loads(json.dumps(m.to_json()))
    assert len(dump) == 9 and all(len(layer) == 9 for layer in dump)
    assert all(len(row) == 9 and all(len(c) == 1 for c in row) for layer in dump for row in layer)
    assert dump[4][2][7] == m.cell(2, 7, 4)


def test_default_matrix_vectors(m):
    # frozen regression vectors for the documented default seed
    assert "".join(m.layers[0][0]) == "Vdyq=t7εA"
    assert first_key(REF_SECRET, m).chars == "82v30+47β25M84D72F85l03h00V000"
