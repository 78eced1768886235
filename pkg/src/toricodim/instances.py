"""Instance files and random essential families."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .koszul import SparseSection
from .lattice import LatticePolytope, PolytopeFamily, is_essential

MAX_ATTEMPTS = 1000


class InstanceError(ValueError):
    """Malformed instance file; the message names the offending field."""


class BudgetExhausted(RuntimeError):
    pass


@dataclass
class Instance:
    family: PolytopeFamily
    vertex_lists: list[list[tuple[int, ...]]]
    sections: list[SparseSection] | None = None
    generic_seed: int | None = None

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "n": self.family.n,
            "polytopes": [[list(p) for p in vl] for vl in self.vertex_lists],
        }
        if self.sections is not None:
            out["sections"] = [
                [{"point": list(m), "value": str(c)} for m, c in sorted(f.coefficients.items())]
                for f in self.sections
            ]
        if self.generic_seed is not None:
            out["generic_seed"] = self.generic_seed
        return out


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceError(f"{where}: expected an integer, got {value!r}")
    return value


def parse_instance(payload: Any) -> Instance:
    if not isinstance(payload, dict):
        raise InstanceError("top level: expected a JSON object")
    if "n" not in payload:
        raise InstanceError("missing key 'n'")
    n = _int(payload["n"], "n")
    if n < 1:
        raise InstanceError("n: must be at least 1")
    polys = payload.get("polytopes")
    if not isinstance(polys, list):
        raise InstanceError("polytopes: expected a list of vertex lists")
    if len(polys) != n + 1:
        raise InstanceError(f"polytopes: expected {n + 1} entries for n={n}, got {len(polys)}")
    vertex_lists = []
    for i, vl in enumerate(polys):
        if not isinstance(vl, list) or not vl:
            raise InstanceError(f"polytopes[{i}]: expected a nonempty list of points")
        pts = []
        for j, p in enumerate(vl):
            if not isinstance(p, list) or len(p) != n:
                raise InstanceError(f"polytopes[{i}][{j}]: expected {n} integer coordinates")
            pts.append(tuple(_int(x, f"polytopes[{i}][{j}]") for x in p))
        vertex_lists.append(pts)
    family = PolytopeFamily(n, tuple(LatticePolytope.hull(vl) for vl in vertex_lists))

    sections = None
    if "sections" in payload:
        raw = payload["sections"]
        if not isinstance(raw, list) or len(raw) != n + 1:
            raise InstanceError(f"sections: expected a list of {n + 1} coefficient lists")
        sections = []
        for i, terms in enumerate(raw):
            if not isinstance(terms, list):
                raise InstanceError(f"sections[{i}]: expected a list of terms")
            coeffs: dict[tuple[int, ...], int] = {}
            for j, term in enumerate(terms):
                where = f"sections[{i}][{j}]"
                if not isinstance(term, dict) or "point" not in term or "value" not in term:
                    raise InstanceError(f"{where}: expected {{'point': [...], 'value': '...'}}")
                pt = term["point"]
                if not isinstance(pt, list) or len(pt) != n:
                    raise InstanceError(f"{where}.point: expected {n} integer coordinates")
                m = tuple(_int(x, f"{where}.point") for x in pt)
                val = term["value"]
                try:
                    c = int(val) if isinstance(val, str) else _int(val, f"{where}.value")
                except ValueError:
                    raise InstanceError(f"{where}.value: not a decimal integer: {val!r}") from None
                if not family[i].contains(m):
                    raise InstanceError(f"{where}.point: {list(m)} lies outside polytope {i}")
                coeffs[m] = coeffs.get(m, 0) + c
            try:
                sections.append(SparseSection(i, coeffs))
            except ValueError as exc:
                raise InstanceError(f"sections[{i}]: {exc}") from None
    seed = None
    if "generic_seed" in payload:
        seed = _int(payload["generic_seed"], "generic_seed")
    if sections is not None and seed is not None:
        raise InstanceError("give either 'sections' or 'generic_seed', not both")
    return Instance(family, vertex_lists, sections, seed)


def load_instance(path: str | Path) -> Instance:
    text = Path(path).read_text(encoding="utf-8")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_instance(payload)


def random_polytope_points(rng: np.random.Generator, n: int, max_coord: int) -> list[tuple[int, ...]]:
    """2 to 2n random points of [0, max_coord]^n (at least 2)."""
    k = int(rng.integers(2, max(2, 2 * n), endpoint=True))
    return [tuple(int(x) for x in row) for row in rng.integers(0, max_coord, size=(k, n), endpoint=True)]


def random_family(
    n: int,
    max_coord: int,
    rng: np.random.Generator,
    accept: Callable[[PolytopeFamily], bool] | None = None,
    max_attempts: int = MAX_ATTEMPTS,
):
    """Sample an essential family (optionally also passing ``accept``).

    Returns ``(family, vertex_lists)`` where each vertex list is the
    polytope's vertex set.
    """
    for _ in range(max_attempts):
        raw = [random_polytope_points(rng, n, max_coord) for _ in range(n + 1)]
        F = PolytopeFamily(n, tuple(LatticePolytope.hull(pts) for pts in raw))
        if is_essential(F).essential and (accept is None or accept(F)):
            return F, [list(P.vertices) for P in F.members]
    raise BudgetExhausted(f"no acceptable family after {max_attempts} attempts")


def random_instance(n: int, max_coord: int, seed: int) -> Instance:
    if n not in (1, 2, 3, 4):
        raise InstanceError("n must be 1, 2, 3 or 4")
    if max_coord < 1:
        raise InstanceError("max_coord must be at least 1")
    F, vls = random_family(n, max_coord, np.random.default_rng(seed))
    return Instance(F, vls)
