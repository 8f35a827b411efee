import json

import pytest

from pgfree.errors import GeometryError, PointSetParseError, RankCapError
from pgfree.pointset import AmbientGeometry, PointSet, pointset_from_mask


def test_ambient_geometry():
    g = AmbientGeometry(4)
    assert g.point_count == 15
    assert list(g.points()) == list(range(1, 16))
    assert g.contains(15) and not g.contains(16) and not g.contains(0)
    with pytest.raises(RankCapError):
        AmbientGeometry(0)
    with pytest.raises(RankCapError):
        AmbientGeometry(25)


def test_pointset_basics():
    e = PointSet.from_points(3, [1, 3, 5])
    assert e.size == 3
    assert 3 in e and 2 not in e and 0 not in e
    assert e.points == (1, 3, 5)
    assert e.density.numerator == 3 and e.density.denominator == 8
    assert PointSet.full(3).size == 7
    assert PointSet.empty(3).size == 0
    assert e.complement().size == 4


def test_zero_point_rejected():
    with pytest.raises(GeometryError):
        PointSet(3, 0b1)
    with pytest.raises(GeometryError):
        PointSet.from_points(3, [0, 1])
    with pytest.raises(GeometryError):
        PointSet.from_points(3, [8])


def test_set_algebra():
    a = PointSet.from_points(3, [1, 2, 3])
    b = PointSet.from_points(3, [3, 4])
    assert a.union(b).points == (1, 2, 3, 4)
    assert a.intersection(b).points == (3,)
    assert a.difference(b).points == (1, 2)
    assert a.with_point(7).size == 4
    assert a.without_point(2).points == (1, 3)
    assert a.intersection(b).issubset(a)
    with pytest.raises(GeometryError):
        a.union(PointSet.from_points(4, [1]))


def test_indicator_roundtrip():
    e = PointSet.from_points(4, [1, 7, 14])
    ind = e.indicator()
    assert ind.shape == (16,)
    assert [i for i, v in enumerate(ind) if v] == [1, 7, 14]
    assert pointset_from_mask(4, ind) == e


def test_json_roundtrip():
    e = PointSet.from_points(4, [2, 9, 15])
    back = PointSet.parse(e.to_json())
    assert back == e
    obj = json.loads(e.to_json())
    assert obj == {"rank": 4, "points": [2, 9, 15]}


def test_compact_roundtrip():
    e = PointSet.from_points(4, [1, 2, 3, 11])
    s = e.to_compact()
    assert s == "4:80E"
    assert PointSet.parse(s) == e
    assert PointSet.from_compact("3:  AA".strip()) == PointSet.from_points(3, [1, 3, 5, 7])


def test_parse_errors_carry_position():
    with pytest.raises(PointSetParseError) as exc:
        PointSet.parse('{"rank": 4, "points": [1, 0, 2]}')
    assert "points[1]" in str(exc.value)

    with pytest.raises(PointSetParseError) as exc:
        PointSet.parse('{"rank": 4, "points": [99]}')
    assert "points[0]" in str(exc.value)

    with pytest.raises(PointSetParseError) as exc:
        PointSet.parse("4:80G")
    assert "char 2" in str(exc.value)

    with pytest.raises(PointSetParseError):
        PointSet.parse("4:81")  # bit 0 set

    with pytest.raises(PointSetParseError):
        PointSet.parse("not-a-set")

    with pytest.raises(PointSetParseError) as exc:
        PointSet.parse('{"rank": 4')
    assert "invalid JSON" in str(exc.value)


def test_parse_sniffs_format():
    assert PointSet.parse('{"rank": 2, "points": [1]}') == PointSet.parse("2:2")
