"""
Elliptic Fibrations
===================
Kodaira fiber data and fiber preparation on rational elliptic surfaces.

Features:
- FiberShape table (Euler number, components, branch count) for every Kodaira type
- Reference dual graph for each type
- Euler-sum and trivial-lattice rank checks
- Enumeration of admissible ramification pairs and of fiber multisets
- prepare_fiber: blow-ups that turn II, III, IV, I_n into branch-ready shapes
- EllipticFibration descriptor with an optional multiplicity-2 fiber
"""

import logging
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from k3calc.birational import blow_up
from k3calc.dualgraph import Config, ConfigBuilder, InvariantLedger

logger = logging.getLogger(__name__)

RATIONAL_ELLIPTIC = InvariantLedger.rational(0)

_I_PATTERN = re.compile(r'^I(\d+)(\*?)$')
_NAMED = {
    'II': (2, 1, 1),
    'III': (3, 2, 2),
    'IV': (4, 3, 4),
    'IV*': (8, 7, None),
    'III*': (9, 8, None),
    'II*': (10, 9, None),
}

# Configurations used by the scenarios; all three occur on rational elliptic surfaces.
REALIZABLE_CONFIGURATIONS = (
    ('I9', 'I1', 'I1', 'I1'),
    ('I8', 'I2', 'I1', 'I1'),
    ('I5', 'I5', 'I1', 'I1'),
)


@dataclass(frozen=True)
class FiberShape:
    """One row of the Kodaira table."""
    kodaira: str
    euler: int
    components: int
    branch_count: Optional[int]


def normalize_type(label: str) -> str:
    """Canonical spelling: 'I_9' -> 'I9', 'smooth' -> 'I0', 'iv*' -> 'IV*'."""
    text = label.strip().replace('_', '').replace('{', '').replace('}', '').upper()
    if text in ('SMOOTH', 'I0'):
        return 'I0'
    if text in _NAMED or _I_PATTERN.match(text):
        return text
    raise ValueError(f"Unknown Kodaira fiber type: {label!r}")


def fiber_shape(label: str) -> FiberShape:
    kind = normalize_type(label)
    if kind in _NAMED:
        euler, components, branch = _NAMED[kind]
        return FiberShape(kind, euler, components, branch)
    n, star = _I_PATTERN.match(kind).groups()
    n = int(n)
    if star:
        return FiberShape(kind, n + 6, n + 5, None)
    if n == 0:
        return FiberShape('I0', 0, 1, 0)
    return FiberShape(kind, n, n, n)


def i_index(label: str) -> Optional[int]:
    """n for a type I_n (n >= 0), None otherwise."""
    match = _I_PATTERN.match(normalize_type(label))
    if match is None or match.group(2):
        return None
    return int(match.group(1))


# ============================================================================
# Reference Dual Graphs
# ============================================================================

def _star(builder: ConfigBuilder, prefix: str, center_mult: int, arms: Sequence[Sequence[int]]):
    center = f"{prefix}1"
    builder.add_curve(center, -2, mult=center_mult)
    index = 1
    for arm in arms:
        previous = center
        for mult in arm:
            index += 1
            curve_id = f"{prefix}{index}"
            builder.add_curve(curve_id, -2, mult=mult)
            builder.meet(previous, curve_id)
            previous = curve_id


def fiber_data(label: str, prefix: str = 'F', ledger: Optional[InvariantLedger] = None) -> Tuple[FiberShape, Config]:
    """
    Kodaira table row plus a canonical configuration of the fiber.

    Parameters
    ----------
    label : str
        Fiber type ('I9', 'II', 'IV*', 'I0' / 'smooth', ...)
    prefix : str
        Component ids are prefix1, prefix2, ...
    ledger : InvariantLedger, optional
        Ledger of the surface (default: rational elliptic, K^2 = 0)

    Returns
    -------
    Tuple[FiberShape, Config]
        Table row and reference configuration with multiplicities
    """
    shape = fiber_shape(label)
    kind = shape.kodaira
    builder = ConfigBuilder(ledger or RATIONAL_ELLIPTIC)
    first = f"{prefix}1"

    if kind in ('I0', 'I1', 'II'):
        builder.add_curve(first, 0, genus=1)
        if kind == 'I1':
            builder.add_point(None, [first, first])
        elif kind == 'II':
            builder.add_point(None, [(first, 2)])
    elif kind == 'III':
        builder.add_curve(first, -2).add_curve(f"{prefix}2", -2)
        builder.meet(first, f"{prefix}2", contact=2)
    elif kind == 'IV':
        ids = [f"{prefix}{j}" for j in (1, 2, 3)]
        for curve_id in ids:
            builder.add_curve(curve_id, -2)
        builder.add_point(None, ids)
    elif kind == 'IV*':
        _star(builder, prefix, 3, [[2, 1], [2, 1], [2, 1]])
    elif kind == 'III*':
        _star(builder, prefix, 4, [[2], [3, 2, 1], [3, 2, 1]])
    elif kind == 'II*':
        _star(builder, prefix, 6, [[3], [4, 2], [5, 4, 3, 2, 1]])
    elif kind.endswith('*'):
        n = shape.components - 5
        chain = [f"{prefix}{j}" for j in range(1, n + 2)]
        tips = [f"{prefix}{j}" for j in range(n + 2, n + 6)]
        for curve_id in chain:
            builder.add_curve(curve_id, -2, mult=2)
        for curve_id in tips:
            builder.add_curve(curve_id, -2)
        for a, b in zip(chain, chain[1:]):
            builder.meet(a, b)
        builder.meet(chain[0], tips[0])
        builder.meet(chain[0], tips[1])
        builder.meet(chain[-1], tips[2])
        builder.meet(chain[-1], tips[3])
    else:
        n = shape.components
        ids = [f"{prefix}{j}" for j in range(1, n + 1)]
        for curve_id in ids:
            builder.add_curve(curve_id, -2)
        for j in range(n):
            builder.meet(ids[j], ids[(j + 1) % n])

    return shape, builder.build()


# ============================================================================
# Necessary Conditions and Enumeration
# ============================================================================

def check_euler_sum(types: Iterable[str], total: int = 12) -> bool:
    """True iff the Euler numbers of the fibers add up to total."""
    return sum(fiber_shape(t).euler for t in types) == total


def rank_bound_ok(types: Iterable[str], max_rank: int = 8) -> bool:
    """True iff sum(components - 1) <= max_rank."""
    return sum(fiber_shape(t).components - 1 for t in types) <= max_rank


def trivial_lattice_rank(types: Iterable[str]) -> int:
    """2 + sum(components - 1): lower bound for rho of the elliptic surface."""
    return 2 + sum(fiber_shape(t).components - 1 for t in types)


def enumerate_pairs(max_total: int = 10) -> List[Tuple[int, int]]:
    """
    Ordered ramification pairs (n1, n2) with n_i >= 1 and 2 <= n1 + n2 <= max_total.

    Returns
    -------
    List[Tuple[int, int]]
        Sorted ordered pairs
    """
    return [(n1, n2) for n1 in range(1, max_total) for n2 in range(1, max_total - n1 + 1)]


def _singular_types(euler: int) -> List[str]:
    types = [f"I{n}" for n in range(1, euler + 1)]
    types += ['II', 'III', 'IV']
    types += [f"I{n}*" for n in range(0, euler - 5)]
    types += ['IV*', 'III*', 'II*']
    return [t for t in types if 0 < fiber_shape(t).euler <= euler]


def enumerate_configurations(euler: int = 12, max_rank: int = 8) -> Set[Tuple[str, ...]]:
    """
    All multisets of singular fiber types passing the Euler-sum and rank conditions.

    Parameters
    ----------
    euler : int
        Required Euler sum
    max_rank : int
        Bound on sum(components - 1)

    Returns
    -------
    Set[Tuple[str, ...]]
        Multisets as tuples in table order
    """
    types = _singular_types(euler)
    found = set()

    def extend(start: int, chosen: List[str], remaining: int, rank: int):
        if remaining == 0:
            found.add(tuple(chosen))
            return
        for index in range(start, len(types)):
            shape = fiber_shape(types[index])
            next_rank = rank + shape.components - 1
            if shape.euler <= remaining and next_rank <= max_rank:
                chosen.append(types[index])
                extend(index, chosen, remaining - shape.euler, next_rank)
                chosen.pop()

    extend(0, [], euler, 0)
    logger.info(f"Enumerated {len(found)} fiber configurations with Euler sum {euler}, rank <= {max_rank}")
    return found


# ============================================================================
# Fiber Preparation
# ============================================================================

def prepare_fiber(label: str, prefix: str = 'F', ledger: Optional[InvariantLedger] = None) -> Tuple[Config, int]:
    """
    Blow up a singular fiber until it has a branch-ready shape.

    Components of the original fiber become prefix.D1, prefix.D2, ...; exceptional
    curves are prefix.H<j>, except the first exceptional curve over a type IV
    point, which becomes the central prefix.D4.

    Parameters
    ----------
    label : str
        'II', 'III', 'IV' or 'I<n>' with n >= 1
    prefix : str
        Fiber name used in the curve ids
    ledger : InvariantLedger, optional
        Ledger before the blow-ups (default: rational elliptic)

    Returns
    -------
    Tuple[Config, int]
        Total transform with multiplicities, and the number of blow-ups
    """
    kind = normalize_type(label)
    n = i_index(kind)
    if kind not in ('II', 'III', 'IV') and not (n is not None and n >= 1):
        raise ValueError(f"prepare_fiber supports II, III, IV and I_n (n >= 1), got {label}")

    _, config = fiber_data(kind, prefix=f"{prefix}.D", ledger=ledger)
    original_points = [p.id for p in config.points]

    if kind == 'III':
        config = blow_up(config, original_points[0], f"{prefix}.H2")
        triple = next(p for p in config.points_on(f"{prefix}.H2") if len(p.branches) == 3)
        config = blow_up(config, triple.id, f"{prefix}.H1")
    elif kind == 'IV':
        config = blow_up(config, original_points[0], f"{prefix}.D4")
        for j, point in enumerate(config.points_on(f"{prefix}.D4"), start=1):
            config = blow_up(config, point.id, f"{prefix}.H{j}")
    else:
        for j, point_id in enumerate(original_points, start=1):
            config = blow_up(config, point_id, f"{prefix}.H{j}")

    count = (ledger or RATIONAL_ELLIPTIC).k_squared - config.ledger.k_squared
    logger.debug(f"Prepared fiber {prefix} of type {kind}: {count} blow-ups, {len(config.curves)} curves")
    return config, count


def dim_anti_bicanonical(k_sq_contracted: int) -> int:
    """
    Dimension of |-2K| on the contracted log del Pezzo surface, 3 K^2.

    Parameters
    ----------
    k_sq_contracted : int
        K^2 of the contracted surface (n + K_S^2 for n contracted index-two points)

    Returns
    -------
    int
        3 * K^2
    """
    if k_sq_contracted < 1:
        raise ValueError(f"K^2 = {k_sq_contracted} <= 0: not a del Pezzo surface")
    return 3 * k_sq_contracted


@dataclass(frozen=True)
class EllipticFibration:
    """Named fibers with Kodaira types; at most one fiber has multiplicity 2."""
    fibers: Tuple[Tuple[str, str], ...]
    multiple: Optional[str] = None

    def __post_init__(self):
        normalized = tuple((name, normalize_type(kind)) for name, kind in self.fibers)
        object.__setattr__(self, 'fibers', normalized)
        names = [name for name, _ in normalized]
        if len(set(names)) != len(names):
            raise ValueError(f"Duplicate fiber names: {names}")
        if self.multiple is not None:
            kinds = dict(normalized)
            if self.multiple not in kinds:
                raise ValueError(f"Multiple fiber {self.multiple} is not a declared fiber")
            if i_index(kinds[self.multiple]) is None:
                raise ValueError(f"Multiple fiber {self.multiple} must be of type I_s, got {kinds[self.multiple]}")

    @property
    def types(self) -> Dict[str, str]:
        return dict(self.fibers)

    def singular_types(self) -> List[str]:
        return [kind for _, kind in self.fibers if kind != 'I0']

    def is_complete(self, total: int = 12) -> bool:
        return check_euler_sum(self.singular_types(), total)

    def rank_bound_ok(self, max_rank: int = 8) -> bool:
        return rank_bound_ok(self.singular_types(), max_rank)


if __name__ == "__main__":
    for kind in ('II', 'III', 'IV', 'I1', 'I9'):
        prepared, steps = prepare_fiber(kind)
        print(f"{kind}: {steps} blow-ups, self-ints {[c.self_int for c in prepared.curves]}")
    print(f"ordered pairs: {len(enumerate_pairs())}")
