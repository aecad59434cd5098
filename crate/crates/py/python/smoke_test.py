"""Smoke test for the cosan_py extension module.

Build and install first, e.g. `maturin develop -m crates/py/Cargo.toml`.
"""

import json

import cosan_py as cs


def main() -> None:
    f = cs.FinFun("3>2:1,1,2")
    assert (f.dom, f.cod, f.values()) == (3, 2, [1, 1, 2])
    assert f.is_surjective() and not f.is_injective()
    assert str(f.after(cs.FinFun("2>3:1,3"))) == "2>2:1,2"

    powerset = cs.InjCoeff.builtin("powerset", 4)
    assert powerset.sizes() == [1, 2, 2, 0, 0]
    assert len(cs.evaluate(powerset, 3)) == 8

    table = cs.tabulate(powerset, 4)
    assert table.sizes() == [1, 2, 4, 8, 16]
    assert cs.check_functor(table)["result"] == "pass"
    assert cs.check_pullbacks(table)["result"] == "pass"
    assert all(cs.check_cocone(table, k)["result"] == "pass" for k in range(5))

    coeff, reports = cs.extract(table)
    assert coeff.sizes() == [1, 2, 2, 0, 0]
    assert [r["result"] for r in reports] == ["pass", "pass"]
    assert coeff.is_isomorphic(powerset)

    again = cs.InjCoeff.from_json(json.dumps(powerset.to_json()))
    assert again.sizes() == powerset.sizes()

    squash = cs.collapse(3)
    report = cs.check_semicartesian(squash)
    assert report["result"] == "fail" and report["witness"]["g"] == "2>1:1,1"
    try:
        cs.extract_nat(cs.InjCoeff.builtin("powerset", 3), cs.InjCoeff.builtin("constant", 3), squash)
    except ValueError as err:
        assert "2>1:1,1" in str(err)
    else:
        raise AssertionError("collapse must not extract")

    pplus = cs.SurCoeff.builtin("pplus")
    composite, coeff, reports = cs.compose(pplus, cs.InjCoeff.builtin("powerset", 3), 3)
    assert composite.sizes() == [1, 3, 15, 255]
    assert coeff.sizes() == [1, 3, 12, 216]
    assert all(r["result"] == "pass" for r in reports)

    assert cs.check_strength(pplus, 2)["result"] == "pass"
    assert cs.boolean_hom_check(3)["result"] == "pass"
    print("cosan_py smoke test: ok")


if __name__ == "__main__":
    main()
