"""Smoke test for the Python bindings.

Build and install first:

    pip install maturin
    pip install --no-build-isolation -e crates/python
"""

import json

import canyons


def main():
    f = canyons.Germ("x^3 + y^12")
    a = f.analyze()
    assert a.milnor == 22, a.milnor
    assert len(a.canyons) == 1
    c = a.canyons[0]
    assert (c.degree, c.multiplicity, c.h, c.partial_milnor, c.curvature_units) == ("11/2", 2, "12", 22, 24)
    assert c.disk_geometry == (24, "11/24", "1/12", "5/12")
    assert json.loads(a.to_json())["schema_version"] == 1

    g = canyons.Germ("x^3 + y^12 + x^2*y^5")
    assert [p.series for p in g.polars()] == ["0", "-2/3*y^5"]
    verdict, witness = canyons.compare(f, g)
    assert verdict == "DISTINGUISHED" and "{11/2} != {6, 6}" in witness

    q = canyons.Germ("z^4 + z^2*w^2 + w^4")
    assert q.variables == ("z", "w")
    assert canyons.compare(q, canyons.Germ("z^4 + w^4")) == ("INDISTINGUISHABLE", None)
    assert q.signature() == canyons.Germ("z^4 + w^4").signature()

    assert g.milnor() == g.milnor_resultant() == 22
    assert len(g.generic_polars("-1/2+i")) == 2

    try:
        canyons.Germ("x^2 + 1")
    except ValueError:
        pass
    else:
        raise AssertionError("a germ must vanish at the origin")
    try:
        g.analyze(horizon="1")
    except canyons.AnalysisError:
        pass
    else:
        raise AssertionError("a horizon of 1 is too short")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
