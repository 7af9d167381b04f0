from fractions import Fraction

import pytest

from gmspace.registry import SigmaError, SigmaRegistry, canonical_serialize, parse_serialization
from gmspace.vectors import FinVector, parse_vector


def seq_a():
    return [parse_vector("1:1/4,2:1/4"), parse_vector("6:1/4")]


def seq_b():
    return [parse_vector("1:1/4,3:1/4"), parse_vector("6:1/4")]


def test_canonical_bytes():
    assert canonical_serialize([FinVector.unit(1)]) == b"S1;F1:1:1/1;"
    s = seq_a()
    assert parse_serialization(canonical_serialize(s)) == s


def test_conforming_growth_bound_and_next_free():
    reg = SigmaRegistry("conforming")
    # max supp 6 and sup norm 1/2 of the sum: bound 4 * 6 * 2
    s = [parse_vector("1:1/2,2:1/2"), parse_vector("6:1/2")]
    assert SigmaRegistry.growth_bound(s) == 48
    assert reg.assign(s) == 48
    assert reg.assign(s) == 48
    t = [parse_vector("1:1/2,3:1/2"), parse_vector("6:1/2")]
    assert reg.assign(t) == 52
    assert reg.is_injective()


def test_compact_values_are_small_multiples_of_four():
    reg = SigmaRegistry("compact")
    assert reg.assign(seq_a()) == 4
    assert reg.assign(seq_b()) == 8


def test_rejects_non_blocks_and_zero():
    reg = SigmaRegistry()
    with pytest.raises(SigmaError):
        reg.assign([parse_vector("2:1"), parse_vector("1:1")])
    with pytest.raises(SigmaError):
        reg.assign([FinVector.zero()])


def test_persistence_is_bit_exact(tmp_path):
    reg = SigmaRegistry("compact")
    reg.assign(seq_a())
    reg.assign(seq_b())
    p = tmp_path / "reg.tsv"
    reg.save(p)
    again = SigmaRegistry.load(p)
    q = tmp_path / "again.tsv"
    again.save(q)
    assert p.read_bytes() == q.read_bytes()
    assert again.lookup(seq_b()) == 8


def test_tampered_file_rejected(tmp_path):
    reg = SigmaRegistry("compact")
    reg.assign(seq_a())
    p = tmp_path / "reg.tsv"
    reg.save(p)
    p.write_text(p.read_text().replace("\t4", "\t6"))
    with pytest.raises(ValueError):
        SigmaRegistry.load(p)


def test_fraction_keys_normalised():
    a = [FinVector({1: Fraction(2, 8)})]
    b = [FinVector({1: Fraction(1, 4)})]
    assert canonical_serialize(a) == canonical_serialize(b)
