"""
Seven-valued contextual classifier.

The value of a proposition over a context family is the nonempty subset of
{T, F, I}: supported somewhere, refuted somewhere, indeterminate somewhere.
It is a meta-level summary; no connectives are defined on the values.
"""
from enum import Enum

import pandas as pd

from ..utils.errors import EmptyFamilyError
from .forcing import forces, indeterminate_at
from .propositions import Not, render_proposition

REPORT_COLUMNS = ["prop", "value", "support", "refute", "indet"]


class SevenValue(Enum):
    T = "T"
    F = "F"
    TF = "TF"
    I = "I"  # noqa: E741
    TI = "TI"
    FI = "FI"
    TFI = "TFI"

    @classmethod
    def from_flags(cls, supported, refuted, indeterminate):
        text = ("T" if supported else "") + ("F" if refuted else "") + ("I" if indeterminate else "")
        if not text:
            raise ValueError("a contextual value is never empty")
        return cls(text)

    @property
    def members(self):
        return frozenset(self.value)

    def __str__(self):
        return self.value


def _family(model, family):
    family = list(dict.fromkeys(family))
    if not family:
        raise EmptyFamilyError("context family must be nonempty")
    for c in family:
        model.poset.require(c)
    # Report contexts in poset declaration order
    rank = {name: i for i, name in enumerate(model.poset.names)}
    return sorted(family, key=rank.__getitem__)


def _split(model, family, phi):
    support = [c for c in family if forces(model, c, phi)]
    refute = [c for c in family if forces(model, c, Not(phi))]
    indet = [c for c in family if indeterminate_at(model, c, phi)]
    return support, refute, indet


def classify(model, family, phi):
    family = _family(model, family)
    support, refute, indet = _split(model, family, phi)
    return SevenValue.from_flags(bool(support), bool(refute), bool(indet))


def classify_report(model, family, phis):
    """One row per proposition, in the order given."""
    family = _family(model, family)
    rows = []
    for phi in phis:
        support, refute, indet = _split(model, family, phi)
        value = SevenValue.from_flags(bool(support), bool(refute), bool(indet))
        rows.append([render_proposition(phi), str(value),
                     " ".join(support), " ".join(refute), " ".join(indet)])
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)
