"""Smoke test for the pymurphy extension module.

Build and install first, for example:
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/pymurphy-*.whl
"""

import json

import pymurphy


def main():
    assert pymurphy.SCHEMA_VERSION == "1"

    sigma3 = pymurphy.MurphyFan(3)
    fan = sigma3.fan()
    assert len(fan.rays) == 8 and len(fan.max_cones) == 12
    assert fan.validate() is None and fan.is_smooth() and fan.is_complete()
    assert fan.class_group() == (5, [])
    assert sigma3.cone_membership([[1], [2]])
    assert not sigma3.cone_membership([[1], [2], [3]])
    assert pymurphy.MurphyFan(4, lazy=True).ray_count == 20

    plane = pymurphy.Fan([[1, 0], [0, 1], [-1, -2]], [[0, 1], [1, 2], [2, 0]])
    assert not plane.is_smooth()
    # canonical ray order is lexicographic: (-1,-2), (0,1), (1,0)
    assert plane.rays[2] == [1, 0]
    assert plane.cartier_data([0, 0, 1]) is None
    assert plane.cartier_data([0, 0, 2]) is not None
    assert pymurphy.smith_form([[2, 4], [6, 8]]) == [2, 4]
    assert pymurphy.smith_form([[10**30, 0], [0, 1]]) == [1, 10**30]

    pair = pymurphy.Incidence(2, 1, [(1, 1)])
    assert pair.conditions() == ["INCIDENT(1, 1)", "NON_INCIDENT(2, 1)", "DISTINCT_POINTS(1, 2)"]
    assert pair.chern_is_valid()
    assert pair.audit()
    for p, count in [(2, 84), (3, 468)]:
        report = pair.verify(p)
        assert report["equal"] and report["moduli_count"] == report["incidence_count"] == count
        assert json.loads(report["report"])["moduli_count"] == count

    fano = pymurphy.Incidence.fano()
    assert len(fano.enumerate(2)) == 168
    assert fano.enumerate(3) == []
    assert fano.audit()

    print("pymurphy smoke test passed")


if __name__ == "__main__":
    main()
