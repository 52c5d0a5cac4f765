"""Smoke test for the Python extension.

Build first with `cargo build -p clique-blowup-py --release` (or install it
with `maturin develop -m crates/py/Cargo.toml`), then run this script.
"""

import importlib.util
import json
import sys
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    try:
        import clique_blowup
        return clique_blowup
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libclique_blowup_py.so"
        if lib.exists():
            spec = importlib.util.spec_from_file_location("clique_blowup", lib)
            mod = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(mod)
            return mod
    sys.exit("extension not built; run `cargo build -p clique-blowup-py --release`")


cb = load()

k3 = cb.Graph.generate("complete:3")
h = cb.clique_blowup(k3, 5)
assert (h.vertex_count, h.edge_count) == (12, 30)
assert cb.blowup_counts(3, 3, 5, 1) == (12, 30)
assert cb.blowup_counts(3, 3, 5, 40)[1] == 3 * 10**40

sigma = cb.laplacian_spectrum(h)
assert [m for _, m in sigma.entries()] == [1, 2, 9]
theorem = cb.spectrum_by_theorem(cb.laplacian_spectrum(k3), 3, 3, 5, False)
ok, detail = cb.multiset_match(theorem, sigma)
assert ok, detail

assert abs(cb.kf_star_spectral(sigma, 30) - 752) < 1e-8 * 752
assert abs(cb.kf_star_direct(h) - 752) < 1e-8 * 752
assert abs(cb.kemeny_spectral(sigma) - 188 / 15) < 1e-10
assert cb.tau_exact(h) == 2343750
assert abs(cb.tau_spectral(h, sigma) - 2343750) < 1e-6 * 2343750

assert cb.kf_star_exact(k3) == 8
assert cb.kf_star_blowup_closed(8, 3, 3, 5, 1) == 752
assert cb.kemeny_blowup_closed(Fraction(4, 3), 3, 3, 5, 1) == Fraction(188, 15)
assert cb.tau_blowup_closed(3, 3, 3, 5, 1) == 2 * 5**8 * 3

c4 = cb.Graph.parse("0 1\n1 2\n2 3\n3 0\n")
x, y, bip = c4.bipartition()
assert bip and sorted(x + y) == [0, 1, 2, 3]
assert c4.incidence_rank() == 3 and k3.incidence_rank() == 3

report = json.loads(cb.index_report(k3, 5, 1, route="closed_form"))
assert report["tau_exact"] == "2343750" and report["kemeny_exact"] == "188/15"

try:
    cb.blowup_iterate(k3, 5, 6)
except cb.SizeCapExceeded:
    pass
else:
    raise AssertionError("size cap not enforced")

try:
    cb.Graph(2, [(0, 0)])
except cb.BlowupError:
    pass
else:
    raise AssertionError("self-loop accepted")

passed, matrix = cb.verify(corpus=["complete:3", "cycle:4"], ns=[3], rs=[1])
assert passed, matrix

print("smoke test ok:", h, sigma)
