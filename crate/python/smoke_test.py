"""Smoke test for the pytropext bindings.

Build and install first:  pip install --no-build-isolation -e crates/python
"""

import json
import pathlib

import pytropext as t

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "fixtures"


def kernel():
    q = t.Polyhedron.orthant(2)
    s = t.AffineMap(2, [[1, 1]], ["0"])
    ray = t.image(q, s)
    assert ray.vertices() == [["0"]] and ray.rays() == [["1"]]
    assert t.preimage(ray, s) == t.Polyhedron(2, [([1, 1], 0)])
    swap = t.AffineMap(2, [[0, 1], [1, 0]], [0, 0])
    diag = t.fixed_locus(q, [swap])
    assert diag.rays() == [["1", "1"]]
    assert t.equalizer(q, swap, t.AffineMap.identity(2)).same_set(diag)
    half = t.Polyhedron(1, [([1], "1/2")])
    assert half.contains(["1/2"]) and not half.contains([0])


def universal():
    u = t.UniversalExtension.from_json((FIXTURES / "ray_target.json").read_text())
    assert u.pu.dimension() == 2
    assert u.basepoint == ["1", "3", "2"]
    assert u.cutting_equations() == ["x0 - x1 + x2 = 0"]
    assert all(passed for _, _, passed, _ in u.embedding_report())
    face, iso = u.face_check(["e"])
    assert iso and face.dimension() == 1


def cli():
    text = (FIXTURES / "split2.json").read_text()
    code, out = t.run("pushout", text)
    assert code == 0
    result = json.loads(out)["result"]
    assert result["report"]["passed"]
    code, _ = t.run("classify", text)
    assert code == 2


if __name__ == "__main__":
    kernel()
    universal()
    cli()
    print("pytropext smoke test passed")
