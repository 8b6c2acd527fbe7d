"""
Config Serialization
====================
Bit-stable JSON and DOT renderings of a Config.

Features:
- config_to_dict / config_from_dict: plain-data form with sorted ids
- emit(config, 'json' | 'dot'): sorted keys, two-space indentation
- parse_json: inverse of the JSON emitter
- trace_to_json: a birational trace as a JSON list of steps and Configs
"""

import json
import logging
from dataclasses import asdict
from typing import Dict, List

from k3calc.birational import BirationalTrace
from k3calc.dualgraph import (
    Branch,
    Config,
    CurveNode,
    Edge,
    InvariantLedger,
    MarkedPoint,
    SigmaMark,
    SingularPoint,
)

logger = logging.getLogger(__name__)

FORMATS = ('json', 'dot')
_SWAPPED_PREFIX = 'swapped:'


def _encode_sigma(curve: CurveNode) -> str:
    if curve.sigma_mark == SigmaMark.SWAPPED:
        return f"{_SWAPPED_PREFIX}{curve.partner}"
    return curve.sigma_mark.value


def _decode_sigma(text: str):
    if text.startswith(_SWAPPED_PREFIX):
        return SigmaMark.SWAPPED, text[len(_SWAPPED_PREFIX):]
    return SigmaMark(text), None


def config_to_dict(config: Config) -> Dict:
    """
    Plain-data form of a configuration.

    Curves, edges, points and the branches inside each point are sorted so
    that equal configurations give equal documents regardless of
    construction order.
    """
    curves = [
        {
            'id': c.id,
            'self_int': c.self_int,
            'genus': c.genus,
            'mult': c.mult,
            'is_branch': c.is_branch,
            'sigma_mark': _encode_sigma(c),
        }
        for c in sorted(config.curves, key=lambda c: c.id)
    ]
    edges = [
        {'a': e.a, 'b': e.b, 'local_mult': e.local_mult, 'point': e.point}
        for e in sorted(config.edges, key=lambda e: (e.a, e.b, e.point or '', e.local_mult))
    ]
    points = [
        {
            'id': p.id,
            'branches': [{'curve': b.curve, 'mult': b.mult} for b in p.branches],
            'contacts': [{'pair': [i, j], 'order': order} for i, j, order in p.contacts],
        }
        for p in sorted((p.normalized() for p in config.points), key=lambda p: p.id)
    ]
    ledger = config.ledger
    document = {
        'curves': curves,
        'edges': edges,
        'points': points,
        'ledger': {
            'k_squared': ledger.k_squared,
            'rho': ledger.rho,
            'euler': ledger.euler,
            'rational': ledger.rational_surface,
        },
    }
    if config.singular_points:
        document['singular_points'] = [
            {'id': s.id, 'label': s.label, 'contracted': s.contracted}
            for s in sorted(config.singular_points, key=lambda s: s.id)
        ]
    return document


def config_from_dict(document: Dict) -> Config:
    """Rebuild a Config from config_to_dict output."""
    try:
        curves = []
        for entry in document['curves']:
            mark, partner = _decode_sigma(entry.get('sigma_mark', SigmaMark.UNMARKED.value))
            curves.append(CurveNode(
                entry['id'], entry['self_int'], entry.get('genus', 0), entry.get('mult', 1),
                entry.get('is_branch', False), mark, partner,
            ))
        edges = [Edge(e['a'], e['b'], e.get('local_mult', 1), e.get('point')) for e in document.get('edges', [])]
        points = [
            MarkedPoint(
                p['id'],
                tuple(Branch(b['curve'], b.get('mult', 1)) for b in p['branches']),
                tuple((c['pair'][0], c['pair'][1], c['order']) for c in p.get('contacts', [])),
            ).normalized()
            for p in document.get('points', [])
        ]
        raw = document['ledger']
        ledger = InvariantLedger(raw['k_squared'], raw['rho'], raw['euler'], raw.get('rational', True))
        singular = [SingularPoint(s['id'], s['label'], s['contracted']) for s in document.get('singular_points', [])]
    except KeyError as e:
        raise ValueError(f"Config document is missing field {e}") from None
    return Config(tuple(curves), tuple(edges), tuple(points), ledger, tuple(singular))


def _to_dot(config: Config) -> str:
    lines = ['graph config {']
    for c in sorted(config.curves, key=lambda c: c.id):
        shape = 'box' if c.is_branch else 'ellipse'
        lines.append(f'  "{c.id}" [label="{c.self_int}/{c.mult}", shape={shape}];')
    for e in sorted(config.edges, key=lambda e: (e.a, e.b, e.point or '', e.local_mult)):
        attrs = f'label="{e.local_mult}"' if e.local_mult != 1 else ''
        suffix = f' [{attrs}]' if attrs else ''
        lines.append(f'  "{e.a}" -- "{e.b}"{suffix};')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def emit(config: Config, fmt: str = 'json') -> str:
    """
    Serialize a configuration.

    Parameters
    ----------
    config : Config
        Configuration to render
    fmt : str
        'json' or 'dot'

    Returns
    -------
    str
        Byte-stable text
    """
    if fmt == 'json':
        return json.dumps(config_to_dict(config), indent=2, sort_keys=True) + '\n'
    if fmt == 'dot':
        return _to_dot(config)
    raise ValueError(f"Unknown format {fmt!r}; expected one of {FORMATS}")


def parse_json(text: str) -> Config:
    return config_from_dict(json.loads(text))


def trace_to_json(trace: BirationalTrace) -> str:
    """Each step as {kind, record, config}."""
    steps: List[Dict] = [
        {'kind': type(record).__name__, 'record': asdict(record), 'config': config_to_dict(config)}
        for record, config in trace.steps
    ]
    return json.dumps(steps, indent=2, sort_keys=True) + '\n'
