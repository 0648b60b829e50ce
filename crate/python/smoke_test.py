"""Smoke test for the heartglue extension module.

Build and install first:  pip install --no-build-isolation -e crates/py
"""

import heartglue as hg


def main():
    zero, ident, middle = hg.Perversity.zero(), hg.Perversity.identity(), hg.Perversity.middle()
    assert middle(5) == 2 and middle(-1) == -1
    assert hg.Perversity.plus_infinity()(0) == float("inf")
    assert middle.is_strict() and not ident.is_strict()
    assert zero.le(hg.Perversity.chi(0)) and not zero.le(ident)
    assert len(hg.Perversity.enumerate((0, 2), (0, 1))) == 4

    u = zero.to_upperset()
    assert u.plot(-2, 2, -2, 2) == "..###\n" * 5
    assert u.to_perversity("northeast") == zero
    assert hg.UpperSet.north_of(1).to_perversity() == ident
    for p in [zero, ident, middle, hg.Perversity.chi(2)]:
        for route in ["northeast", "complement"]:
            assert p.to_upperset(route).to_perversity(route) == p

    koszul = hg.Oracle.koszul()
    assert koszul.is_gluable(-4, 4)
    report = hg.Oracle.coherent_support(3).implications(-4, 4)
    assert report["perverse"] is None
    assert report["grading"] == ((0, 2), (0, 0), 2)
    assert hg.Oracle.beilinson_soule("number-field").compatibility_witness(
        hg.Map.exchange(), [(i, k) for i in range(-2, 3) for k in range(-2, 3)]
    ) is None

    gamma = hg.Map.gamma(ident)
    assert gamma((2, -1)) == 1
    assert koszul.pushforward(gamma, {(0, 3): 1, (-1, 4): 1, (2, 1): 1}) == {3: 3}
    verdicts = koszul.heart(ident, [{(-1, 1): 1, (0, 0): 1}, {(0, 1): 1}])
    assert verdicts == [(True, []), (False, [(0, 1)])]

    try:
        hg.Oracle.coherent_support(3).pushforward(hg.Map.exchange(), {(0, 1): 1, (1, 0): 1})
    except ValueError as e:
        assert "does not vanish" in str(e)
    else:
        raise AssertionError("incompatible pushforward accepted")

    for name in hg.SCENARIOS:
        ok, text = hg.run_demo(name)
        assert ok, text
    print("heartglue smoke test: ok")


if __name__ == "__main__":
    main()
