"""Standard Delzant polytopes, also shipped as JSON under ``ktoric/data``."""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .polytope import DelzantPolytope

__all__ = [
    "projective_space",
    "product_of_lines",
    "hirzebruch",
    "nonsmooth_triangle",
    "FIXTURES",
    "fixture_path",
    "load_fixture",
    "write_fixtures",
]


def projective_space(n: int) -> DelzantPolytope:
    """The standard ``n``-simplex: ``x_i >= 0``, ``sum x_i <= 1``."""
    normals = [tuple(-1 if j == i else 0 for j in range(n)) for i in range(n)]
    normals.append((1,) * n)
    return DelzantPolytope(tuple(normals), (0,) * n + (1,), name=f"cp{n}")


def product_of_lines(n: int = 2) -> DelzantPolytope:
    """The unit cube ``[0, 1]^n`` (``(CP^1)^n``); facets ordered ``-e_1, e_1, -e_2, ...``."""
    normals, offsets = [], []
    for i in range(n):
        for s, o in ((-1, 0), (1, 1)):
            normals.append(tuple(s if j == i else 0 for j in range(n)))
            offsets.append(o)
    return DelzantPolytope(tuple(normals), tuple(offsets), name="square" if n == 2 else f"cube{n}")


def hirzebruch(a: int) -> DelzantPolytope:
    """Trapezoid with normals ``(-1,0), (1,a), (0,-1), (0,1)``."""
    return DelzantPolytope(
        ((-1, 0), (1, a), (0, -1), (0, 1)), (0, a + 1, 0, 1), name=f"hirzebruch_{a}"
    )


def nonsmooth_triangle() -> DelzantPolytope:
    """Triangle with normal ``(1, 2)``: the vertex ``(0, 1)`` has determinant -2."""
    return DelzantPolytope(((-1, 0), (0, -1), (1, 2)), (0, 0, 2), name="nonsmooth")


def _builders():
    return {
        "cp1": lambda: projective_space(1),
        "cp2": lambda: projective_space(2),
        "cp3": lambda: projective_space(3),
        "square": lambda: product_of_lines(2),
        "hirzebruch_1": lambda: hirzebruch(1),
        "hirzebruch_2": lambda: hirzebruch(2),
        "nonsmooth": nonsmooth_triangle,
    }


FIXTURES = tuple(_builders())


def fixture_path(name: str) -> Path:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {FIXTURES}")
    return Path(str(resources.files("ktoric") / "data" / f"{name}.json"))


def load_fixture(name: str) -> DelzantPolytope:
    return DelzantPolytope.from_json(fixture_path(name))


def write_fixtures(directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, build in _builders().items():
        d = build().to_dict()
        d.pop("name", None)
        (directory / f"{name}.json").write_text(json.dumps(d, indent=2) + "\n")
