"""Smoke test for the rospace extension module.

Build and install first:

    pip install maturin
    maturin build --release -m crates/py/Cargo.toml -o dist
    pip install dist/rospace-*.whl
    python python/smoke_test.py
"""

import json
import sys

import rospace


def main():
    d = rospace.dims(2, [1])
    assert (d["V"], d["E"], d["dim_cv"], d["dim_spine"]) == (2, 2, 1, 1), d

    assert len(rospace.enumerate(2)) == 2
    assert len(rospace.enumerate(3)) == 5

    t1 = rospace.fixture("t1")
    assert json.loads(t1)["rospace_format"] == 1
    assert rospace.translation_length(t1, "a") == "0"
    assert rospace.translation_length(t1, "a*b*a^-1*b^-1") == "2"

    ix = rospace.index(t1)
    assert ix["total"] == 2 and ix["equality"], ix

    q = rospace.qrank(rospace.fixture("theta"))
    assert q["r_q"] == 3 and q["equality"], q

    p = rospace.prop41(rospace.fixture("x2-middle"))
    assert p["lengths_generate_l_mod_2lambda"] and p["distances_generate_lambda_mod_l"]

    try:
        rospace.translation_length(rospace.fixture("tripod-violation"), "a")
    except ValueError as e:
        assert "unsupported" in str(e)
    else:
        raise AssertionError("cyclic edge groups should be rejected")

    code, out, _ = rospace.run(["dims", "--n", "3", "--factors", "1", "--json"])
    assert code == 0 and json.loads(out)["E"] == 5

    report = rospace.verify(7)
    assert report[0]["id"] == 7 and report[0]["pass"], report

    print("rospace smoke test: ok ({} fixtures)".format(len(rospace.FIXTURES)))


if __name__ == "__main__":
    sys.exit(main())
