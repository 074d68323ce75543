"""Smoke test for the greenring Python extension.

Build and install first:
    pip install maturin
    maturin build --release -m crates/py/Cargo.toml -o dist && pip install dist/greenring-*.whl
"""

import os
import sys
import tempfile

import greenring as gr


def check(name, got, want):
    ok = got == want
    print(f"{'ok  ' if ok else 'FAIL'} {name}: {got}")
    return ok


def main():
    ring = gr.GreenRing(3)
    results = []

    results.append(check("x * x^2", str(ring.multiply("x", "x^2")), "1"))
    results.append(check("z+ z-", str(ring.multiply("z+", "z-")), "-3 - 2*x*y + 4*x^2*y^2 + 2*y^3"))
    results.append(check("[P(1,0)]", str(ring.class_of("P(1,0)")), "2 - 3*x^2*y^2 + x*y^4"))

    f1 = ring.f_poly(1)
    lhs = ring.class_of("P(1,0)") + ring.class_of("P(3,2)")
    results.append(check("P(1,0) + P(3,2) = x f1^2", lhs, ring.normal_form("x") * f1 * f1))

    y = ring.parse("y")
    results.append(check("dim y^5", (y * y * y * y * y).dim(), 32))
    results.append(check("stable z+ z-", str(ring.stable_normal_form("z+ z-")), "1"))

    parts = dict(ring.tensor("V(2,0)", "M_1(1,0;eta=1)"))
    results.append(check("V(2,0) tensor M_1 has 2 summands", len(parts), 2))

    try:
        ring.parse("z*")
        results.append(check("parse error raised", False, True))
    except gr.ParseError:
        results.append(check("parse error raised", True, True))

    derived = gr.GreenRing(3, derive=True, max_m=1)
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "tables-3.json")
        derived.save_tables(path)
        again = gr.GreenRing(3, tables=path)
        results.append(check("tables round trip", again.tables_checksum(), derived.tables_checksum()))
    reps = derived.verify("stable")
    results.append(check("stable suite", all(r["status"] == "pass" for r in reps), True))

    results.append(check("binomial identity", all(gr.binomial_identity(9, l, s) for l in range(1, 5) for s in range(2 * l + 1)), True))

    print(f"{sum(results)}/{len(results)} passed")
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
