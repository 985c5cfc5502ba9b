"""JSON input files: algebras, operators, varieties, towers, points and test rings.

A bundle file may hold several sections; a section is either inline data or
a path, resolved against the directory of the file that names it.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from b_operators.algebra import AlgebraTable, FiniteAlgebra, table_from, validate
from b_operators.basefield import GENERATOR_NAME, BaseField, RationalFunctionField, TowerField
from b_operators.errors import ParseError, ValidationError, VariableClash
from b_operators.linear import SemilinearMap
from b_operators.operator import AlgebraBValue, OperatorSpec
from b_operators.parse import parse_expression
from b_operators.polynomial import PolyRing
from b_operators.scheme import AffineVariety, base_ring_table

logger = logging.getLogger(__name__)

SECTIONS = ("algebra", "operator", "variety", "subvariety", "point", "tower", "ring", "elements", "vectors", "matrix")


def load_json(path: Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, str(path)) from None


class Source:
    """A section of input data together with the directory its relative paths resolve against."""

    def __init__(self, data: Any, base_dir: Path, name: str):
        self.data = data
        self.base_dir = Path(base_dir)
        self.name = name

    @classmethod
    def from_path(cls, path, name: str) -> "Source":
        path = Path(path)
        return cls(load_json(path), path.parent, str(path))

    def resolve(self, value: Any, name: str) -> "Source":
        if isinstance(value, str) and value.endswith(".json"):
            return Source.from_path(self.base_dir / value, name)
        return Source(value, self.base_dir, f"{self.name}:{name}")


class Bundle:
    """Sections gathered from a bundle file and per-section override files."""

    def __init__(self, bundle: Optional[Path] = None, overrides: Optional[Mapping[str, Optional[Path]]] = None):
        self.sections: Dict[str, Source] = {}
        if bundle is not None:
            root = Source.from_path(bundle, "bundle")
            if not isinstance(root.data, dict):
                raise ValidationError(f"{bundle}: a bundle file must hold a JSON object")
            for key, value in root.data.items():
                if key in SECTIONS:
                    self.sections[key] = root.resolve(value, key)
        for key, path in (overrides or {}).items():
            if path is not None:
                self.sections[key] = Source.from_path(path, key)

    def has(self, name: str) -> bool:
        return name in self.sections

    def get(self, name: str) -> Source:
        try:
            return self.sections[name]
        except KeyError:
            raise ValidationError(f"missing input section {name!r}") from None


# fields and expressions


def field_env(field) -> Dict[str, Any]:
    env = {name: field.gen(name) for name in field.variables}
    if GENERATOR_NAME not in env:
        env[GENERATOR_NAME] = field.lift_code(field.base.generator)
    return env


def parse_element(text: str, field, where: str = ""):
    return parse_expression(text, field_env(field), field.from_int, where)


def parse_polynomial(text: str, ring: PolyRing, where: str = ""):
    K = ring.domain
    env = {name: ring.constant(value) for name, value in field_env(K).items()}
    env.update({name: ring.gen(name) for name in ring.variables})
    return parse_expression(text, env, ring.from_int, where)


def _names(raw: Any, where: str) -> Tuple[str, ...]:
    if not isinstance(raw, list) or not all(isinstance(v, str) for v in raw):
        raise ValidationError(f"{where}: expected a list of variable names")
    return tuple(raw)


def load_algebra(source: Source) -> FiniteAlgebra:
    if not isinstance(source.data, dict):
        raise ValidationError(f"{source.name}: an algebra must be a JSON object")
    return validate(source.data)


def algebra_name(source: Source) -> str:
    if isinstance(source.data, dict) and "name" in source.data:
        return str(source.data["name"])
    return Path(source.name.split(":")[0]).stem


def load_operator(source: Source) -> OperatorSpec:
    raw = source.data
    if not isinstance(raw, dict):
        raise ValidationError(f"{source.name}: an operator must be a JSON object")
    algebra = load_algebra(source.resolve(raw.get("algebra"), "algebra"))
    field = RationalFunctionField(algebra.base, _names(raw.get("vars", []), f"{source.name}.vars"))
    images_raw = raw.get("images", {})
    if not isinstance(images_raw, dict):
        raise ValidationError(f"{source.name}.images: expected an object")
    images = {}
    for name, components in images_raw.items():
        where = f"{source.name}.images.{name}"
        if not isinstance(components, list) or len(components) != algebra.dim:
            raise ValidationError(f"{where}: expected {algebra.dim} components")
        if not all(isinstance(c, str) for c in components):
            raise ValidationError(f"{where}: components must be expression strings")
        if components[0].strip() != name:
            raise ValidationError(f"{where}: component 0 must be {name!r}")
        coords = [parse_element(c, field, f"{where}[{i}]") for i, c in enumerate(components)]
        images[name] = AlgebraBValue(algebra, field, coords)
    return OperatorSpec(algebra, field, images)


def load_variety(source: Source, field) -> Tuple[AffineVariety, Optional[Dict[str, List[str]]]]:
    """The variety and, for a kernel candidate W, its optional ``kernel`` map."""
    raw = source.data
    if not isinstance(raw, dict):
        raise ValidationError(f"{source.name}: a variety must be a JSON object")
    names = _names(raw.get("vars", []), f"{source.name}.vars")
    clash = set(names) & (set(field.variables) | {GENERATOR_NAME})
    if clash:
        raise VariableClash(clash)
    ring = PolyRing(field, names)
    gens = tuple(
        parse_polynomial(text, ring, f"{source.name}.generators[{i}]")
        for i, text in enumerate(raw.get("generators", []))
    )
    kernel = raw.get("kernel")
    if kernel is not None and not isinstance(kernel, dict):
        raise ValidationError(f"{source.name}.kernel: expected an object")
    return AffineVariety(ring, gens, bool(raw.get("prime", False))), kernel


def load_tower(source: Source, K: RationalFunctionField) -> TowerField:
    if not isinstance(source.data, dict):
        raise ValidationError(f"{source.name}: a tower must map root names to elements of K")
    roots = [
        (name, parse_element(text, K, f"{source.name}.{name}"))
        for name, text in source.data.items()
    ]
    return TowerField(K, roots)


def load_point(source: Source, field) -> Dict[str, Any]:
    if not isinstance(source.data, dict):
        raise ValidationError(f"{source.name}: a point must map variables to expressions")
    return {name: parse_element(text, field, f"{source.name}.{name}") for name, text in source.data.items()}


def load_ring(source: Source, k: BaseField) -> AlgebraTable:
    if source.data == "k":
        return base_ring_table(k)
    if not isinstance(source.data, dict):
        raise ValidationError(f"{source.name}: a ring is \"k\" or an algebra table")
    return table_from(source.data, base=k)


def load_elements(source: Source, field) -> List[Tuple[str, Any]]:
    if not isinstance(source.data, list):
        raise ValidationError(f"{source.name}: expected a list of expressions")
    return [(text, parse_element(text, field, f"{source.name}[{i}]")) for i, text in enumerate(source.data)]


def load_vectors(source: Source, field) -> List[list]:
    if not isinstance(source.data, list) or not source.data:
        raise ValidationError(f"{source.name}: expected a non-empty list of vectors")
    return [
        [parse_element(text, field, f"{source.name}[{i}][{j}]") for j, text in enumerate(vector)]
        for i, vector in enumerate(source.data)
    ]


def load_matrix(source: Source, op: OperatorSpec) -> SemilinearMap:
    """dim_W x dim_V entries, each an e-array of expressions (the b_i coordinates)."""
    raw = source.data
    if not isinstance(raw, list) or not raw or not all(isinstance(row, list) for row in raw):
        raise ValidationError(f"{source.name}: expected a matrix of algebra values")
    rows = []
    for r, row in enumerate(raw):
        entries = []
        for c, components in enumerate(row):
            where = f"{source.name}[{r}][{c}]"
            if not isinstance(components, list) or len(components) != op.algebra.dim:
                raise ValidationError(f"{where}: expected {op.algebra.dim} components")
            coords = [parse_element(text, op.field, f"{where}[{i}]") for i, text in enumerate(components)]
            entries.append(AlgebraBValue(op.algebra, op.field, coords))
        rows.append(entries)
    return SemilinearMap(op, len(rows[0]), len(rows), rows)
