"""Regenerate the simplicial-set fixtures in this directory.

    python3 fixtures/build_fixtures.py [outdir]

Writes Delta[n], the boundary spheres, the wedge S^2 v S^4 and the 9-vertex
CP^2 built from ``cp2_9_facets.json``.
"""

import json
import sys
from pathlib import Path

from sullivan.simplicial import boundary_of_simplex, from_facets, standard_simplex, wedge

HERE = Path(__file__).resolve().parent


def cp2_9():
    facets = json.loads((HERE / "cp2_9_facets.json").read_text(encoding="utf-8"))["facets"]
    return from_facets(facets)


def s2_wedge_s4():
    # base points: the first vertex of each sphere
    return wedge(boundary_of_simplex(3), boundary_of_simplex(5))


def corpus() -> dict:
    out = {f"delta{n}": standard_simplex(n) for n in (2, 3, 5)}
    out.update({f"s{n - 1}": boundary_of_simplex(n) for n in (3, 4, 5)})
    out["s2_wedge_s4"] = s2_wedge_s4()
    out["cp2_9"] = cp2_9()
    return out


def main(outdir=HERE):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, X in corpus().items():
        (outdir / f"{name}.json").write_text(X.dumps() + "\n", encoding="utf-8")
        print(f"{name}.json  dim {X.dim}  f-vector {X.f_vector}")


if __name__ == "__main__":
    main(*sys.argv[1:])
