from .commands import (
    EXIT_NOT_GLUABLE, EXIT_OK, cmd_classify, cmd_contexts, cmd_fraction, cmd_glue, cmd_simulate,
    gluing_orders,
)

__all__ = [
    'EXIT_OK', 'EXIT_NOT_GLUABLE', 'gluing_orders',
    'cmd_contexts', 'cmd_classify', 'cmd_glue', 'cmd_fraction', 'cmd_simulate',
]
