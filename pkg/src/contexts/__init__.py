from .order import (
    CausalOrder, Party, enumerate_total_orders, linear_extensions, make_parties,
    make_partial_order, resolve_party, total_order,
)
from .poset import OrderContextPoset, build_context_poset, downset, upset

__all__ = [
    'Party', 'CausalOrder', 'make_parties', 'make_partial_order', 'total_order',
    'enumerate_total_orders', 'linear_extensions', 'resolve_party',
    'OrderContextPoset', 'build_context_poset', 'upset', 'downset',
]
