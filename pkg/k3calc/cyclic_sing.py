"""
Cyclic Quotient Singularities
=============================
Hirzebruch-Jung arithmetic for cyclic quotient singular points.

Features:
- BrieskornType C_{q,q1}: the point whose minimal resolution is the HJ chain of q/q1
- hj_expand / hj_contract between (q, q1) and weight chains
- index_two_resolution: minimal and blown-up resolutions of C_{4n,2n-1}
- Exact discrepancy solve and Cartier index
"""

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from k3calc.dualgraph import (
    Config,
    ConfigBuilder,
    InvariantLedger,
    as_exact_matrix,
    intersection_matrix,
    is_negative_definite,
)

logger = logging.getLogger(__name__)

DEFAULT_LEDGER = InvariantLedger.rational(0)

_LABEL_PATTERN = re.compile(r'^\s*C_?\{?\s*(\d+)\s*,\s*(\d+)\s*\}?\s*$')


class NotLogTerminalError(ValueError):
    """Raised when a discrepancy falls outside [0, 1)."""


def _check_pair(q: int, q1: int):
    if q < 2 or not 1 <= q1 < q:
        raise ValueError(f"Brieskorn pair needs q >= 2 and 1 <= q1 < q, got ({q}, {q1})")
    if math.gcd(q, q1) != 1:
        raise ValueError(f"Brieskorn pair ({q}, {q1}) is not coprime")


@dataclass(frozen=True, order=True)
class BrieskornType:
    """Cyclic quotient singularity C_{q,q1}."""
    q: int
    q1: int

    def __post_init__(self):
        _check_pair(self.q, self.q1)

    @classmethod
    def parse(cls, label: str) -> 'BrieskornType':
        """Parse 'C_{q,q1}' (braces and underscore optional)."""
        match = _LABEL_PATTERN.match(label)
        if match is None:
            raise ValueError(f"Cannot parse Brieskorn label: {label!r}")
        return cls(int(match.group(1)), int(match.group(2)))

    @property
    def weights(self) -> List[int]:
        return hj_expand(self.q, self.q1)

    def __str__(self) -> str:
        return f"C_{{{self.q},{self.q1}}}"


def hj_expand(q: int, q1: int) -> List[int]:
    """
    Hirzebruch-Jung continued fraction of q/q1.

    Parameters
    ----------
    q, q1 : int
        Coprime integers with 1 <= q1 < q

    Returns
    -------
    List[int]
        Weights [b1, ..., bk], all >= 2, with q/q1 = b1 - 1/(b2 - 1/(...))
    """
    _check_pair(q, q1)
    weights = []
    while q1 > 0:
        b = -(-q // q1)
        weights.append(b)
        q, q1 = q1, b * q1 - q
    return weights


def hj_contract(weights: Sequence[int]) -> Tuple[int, int]:
    """
    Evaluate a Hirzebruch-Jung continued fraction exactly.

    Parameters
    ----------
    weights : sequence of int
        Chain weights, all >= 2

    Returns
    -------
    Tuple[int, int]
        (q, q1) with hj_expand(q, q1) == list(weights)
    """
    if not weights:
        raise ValueError("hj_contract needs at least one weight")
    if any(w <= 1 for w in weights):
        raise ValueError(f"HJ weights must all be >= 2, got {list(weights)}")
    value = Fraction(weights[-1])
    for w in reversed(weights[:-1]):
        value = w - 1 / value
    return value.numerator, value.denominator


def chain_config(weights: Sequence[int], prefix: str = 'B', ledger: Optional[InvariantLedger] = None) -> Config:
    """Linear chain of smooth rational curves with self-intersections -w."""
    builder = ConfigBuilder(ledger or DEFAULT_LEDGER)
    ids = [f"{prefix}{j}" for j in range(1, len(weights) + 1)]
    for curve_id, w in zip(ids, weights):
        builder.add_curve(curve_id, -w)
    for a, b in zip(ids, ids[1:]):
        builder.meet(a, b, point_id=f"{a}^{b}")
    return builder.build()


def index_two_weights(n: int) -> List[int]:
    if n < 1:
        raise ValueError(f"Index-two chain needs n >= 1, got {n}")
    return [4] if n == 1 else [3] + [2] * (n - 2) + [3]


def index_two_chain_ids(n: int, d_prefix: str = 'D', h_prefix: str = 'H') -> List[str]:
    """Chain order D1, H1, D2, ..., H(n-1), Dn of the blown-up resolution."""
    ids = []
    for j in range(1, n):
        ids += [f"{d_prefix}{j}", f"{h_prefix}{j}"]
    return ids + [f"{d_prefix}{n}"]


def index_two_resolution(n: int, ledger: Optional[InvariantLedger] = None) -> Tuple[Config, Config]:
    """
    Minimal and blown-up resolutions of the index-two point C_{4n,2n-1}.

    Parameters
    ----------
    n : int
        Number of (-4)-curves after blowing up, n >= 1
    ledger : InvariantLedger, optional
        Ledger of the surface carrying the minimal resolution

    Returns
    -------
    Tuple[Config, Config]
        (chain D1..Dn with weights [3, 2^(n-2), 3] or [4],
         alternating chain of n (-4)-curves D_j and n-1 (-1)-curves H_j)
    """
    from k3calc.birational import blow_up

    minimal = chain_config(index_two_weights(n), prefix='D', ledger=ledger)
    blown = minimal
    for j in range(1, n):
        blown = blow_up(blown, f"D{j}^D{j + 1}", exceptional_id=f"H{j}", total_transform=False)
    logger.debug(f"Index-two resolution n={n}: {len(blown.curves)} curves after {n - 1} blow-ups")
    return minimal, blown


@dataclass(frozen=True)
class DiscrepancyVector:
    """Discrepancies alpha_k with K = g*K_T - sum alpha_k B_k."""
    curve_ids: Tuple[str, ...]
    values: Tuple[Fraction, ...]

    def as_dict(self) -> Dict[str, Fraction]:
        return dict(zip(self.curve_ids, self.values))

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)


def discrepancies(chain: Config) -> DiscrepancyVector:
    """
    Solve (K + sum alpha_k B_k).B_t = 0 exactly.

    Parameters
    ----------
    chain : Config
        Negative definite configuration of smooth rational curves

    Returns
    -------
    DiscrepancyVector
        One rational per curve, in configuration order
    """
    if not chain.curves:
        raise ValueError("discrepancies needs at least one exceptional curve")
    if any(c.genus != 0 for c in chain.curves):
        raise ValueError("discrepancies needs genus-0 curves")
    gram = intersection_matrix(chain)
    if not is_negative_definite(gram):
        raise ValueError("Exceptional configuration is not negative definite")

    # sum_k alpha_k (B_k.B_t) = -K.B_t = 2 + B_t^2
    rhs = sympy.Matrix([2 + c.self_int for c in chain.curves])
    solution = as_exact_matrix(gram).LUsolve(rhs)
    values = tuple(Fraction(int(s.p), int(s.q)) for s in (sympy.Rational(x) for x in solution))

    if any(v < 0 or v >= 1 for v in values):
        raise NotLogTerminalError(f"Discrepancies {[str(v) for v in values]} leave [0, 1): not log terminal")
    return DiscrepancyVector(chain.curve_ids, values)


def cartier_index(chain: Config) -> int:
    """L.c.m. of discrepancy denominators (1 for Du Val points)."""
    return math.lcm(*(v.denominator for v in discrepancies(chain)))


def resolve(label: str) -> Dict:
    """
    Weight chain, discrepancies and Cartier index of a Brieskorn label.

    Parameters
    ----------
    label : str
        e.g. 'C_{40,19}'

    Returns
    -------
    dict
        JSON-ready description
    """
    point = BrieskornType.parse(label)
    chain = chain_config(point.weights)
    vector = discrepancies(chain)
    return {
        'singularity': str(point),
        'q': point.q,
        'q1': point.q1,
        'weights': point.weights,
        'discrepancies': [str(v) for v in vector],
        'cartier_index': math.lcm(*(v.denominator for v in vector)),
    }


if __name__ == "__main__":
    for n in range(1, 11):
        minimal, blown = index_two_resolution(n)
        print(f"n={n}: {index_two_weights(n)} -> {hj_contract(index_two_weights(n))}, "
              f"blown-up chain of {len(blown.curves)}")
    print(resolve('C_{40,19}'))
