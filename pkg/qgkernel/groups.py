# Quantum group descriptors: family + dimension, the partition category used by the Haar oracle,
# and the CLI naming grammar (o:<n>, o+:<n>, u:<n>, u+:<n>, s:<m>, s+:<m>, t, free(...)).
from __future__ import annotations

import enum
import re
from functools import cached_property
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import GroupNameError
from .partitions import PartitionFamily, PartitionKind


class Family(str, enum.Enum):
    O_CLASSICAL = "o"
    O_PLUS = "o+"
    U_CLASSICAL = "u"
    U_PLUS = "u+"
    S_CLASSICAL = "s"
    S_PLUS = "s+"
    TORUS = "t"
    FREE_PRODUCT = "free"


# Families whose generators are self-adjoint (star flags are dropped at word construction)
_SELF_ADJOINT = {Family.O_CLASSICAL, Family.O_PLUS, Family.S_CLASSICAL, Family.S_PLUS}

# Commutative families: relations include [u_ij, u_kl] = 0
_COMMUTATIVE = {Family.O_CLASSICAL, Family.U_CLASSICAL, Family.S_CLASSICAL, Family.TORUS}

_CATEGORY = {
    Family.O_CLASSICAL: PartitionKind.PAIRINGS,
    Family.O_PLUS: PartitionKind.NONCROSSING_PAIRINGS,
    Family.U_CLASSICAL: PartitionKind.COLORED_PAIRINGS,
    Family.U_PLUS: PartitionKind.NONCROSSING_COLORED_PAIRINGS,
    Family.S_CLASSICAL: PartitionKind.ALL,
    Family.S_PLUS: PartitionKind.NONCROSSING,
}


class GroupSpec(BaseModel):
    """
    Descriptor of a supported compact quantum group.

    FREE_PRODUCT carries an ordered, flattened tuple of at least two factors;
    its n is the largest factor dimension (letters are validated per factor).
    """

    model_config = ConfigDict(frozen=True)

    family: Family
    n: int = Field(..., ge=1)
    factors: tuple["GroupSpec", ...] = ()

    @model_validator(mode="after")
    def _check_shape(self) -> "GroupSpec":
        if self.family == Family.TORUS and self.n != 1:
            raise ValueError("the torus has n = 1")
        if self.family == Family.FREE_PRODUCT:
            if len(self.factors) < 2:
                raise ValueError("a free product needs at least two factors")
            if any(f.family == Family.FREE_PRODUCT for f in self.factors):
                raise ValueError("free-product factors must be flattened")
        elif self.factors:
            raise ValueError("only free products carry factors")
        return self

    @property
    def self_adjoint_entries(self) -> bool:
        return self.family in _SELF_ADJOINT

    @property
    def commutative(self) -> bool:
        return self.family in _COMMUTATIVE

    @property
    def is_free_product(self) -> bool:
        return self.family == Family.FREE_PRODUCT

    @cached_property
    def name(self) -> str:
        if self.family == Family.TORUS:
            return "t"
        if self.is_free_product:
            return "free(" + ",".join(f.name for f in self.factors) + ")"
        return f"{self.family.value}:{self.n}"

    def factor(self, tag: int) -> "GroupSpec":
        """Factor by 1-based tag."""
        if not self.is_free_product:
            raise GroupNameError("factor tags only exist on free products", {"group": self.name})
        if not 1 <= tag <= len(self.factors):
            raise GroupNameError("factor tag out of range", {"group": self.name, "tag": tag})
        return self.factors[tag - 1]

    def dimension_of(self, tag: int) -> int:
        return self.factor(tag).n if tag else self.n

    def partition_family(self, pattern: tuple[bool, ...]) -> Optional[PartitionFamily]:
        """Partition category at the degree of `pattern`; None for the torus and free products."""
        kind = _CATEGORY.get(self.family)
        if kind is None:
            return None
        return PartitionFamily(kind, pattern if kind.colored else None)

    def __str__(self) -> str:
        return self.name


GroupSpec.model_rebuild()


def make_group(family: Family | str, n: int = 1) -> GroupSpec:
    """Validated descriptor; raises GroupNameError on incompatible parameters."""
    try:
        fam = Family(family)
    except ValueError as exc:
        raise GroupNameError("unknown group family", {"family": family}) from exc
    if fam == Family.FREE_PRODUCT:
        raise GroupNameError("use make_free_product for free products")
    try:
        return GroupSpec(family=fam, n=n)
    except ValueError as exc:
        raise GroupNameError("invalid group parameters", {"family": fam.value, "n": n}) from exc


def make_free_product(*factors: GroupSpec) -> GroupSpec:
    """Free product with nested free products flattened in order."""
    flat: list[GroupSpec] = []
    for f in factors:
        flat.extend(f.factors if f.is_free_product else (f,))
    try:
        return GroupSpec(family=Family.FREE_PRODUCT, n=max(f.n for f in flat) if flat else 1, factors=tuple(flat))
    except ValueError as exc:
        raise GroupNameError("invalid free product", {"factors": [f.name for f in flat]}) from exc


_SIMPLE = re.compile(r"^(o\+?|u\+?|s\+?):(\d+)$")


def _split_top_level(text: str) -> list[str]:
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            raise GroupNameError("unbalanced parentheses in group name", {"name": text})
        current.append(ch)
    parts.append("".join(current))
    return parts


def parse_group(text: str) -> GroupSpec:
    """Parse the CLI group grammar, e.g. 'o+:4', 't', 'free(o+:2,o+:2)'."""
    name = "".join(text.split()).lower()
    if name == "t":
        return make_group(Family.TORUS, 1)
    if name.startswith("free(") and name.endswith(")"):
        inner = name[len("free("):-1]
        return make_free_product(*(parse_group(p) for p in _split_top_level(inner)))
    m = _SIMPLE.match(name)
    if not m:
        raise GroupNameError("unrecognized group name", {"name": text})
    return make_group(m.group(1), int(m.group(2)))
