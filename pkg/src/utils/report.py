"""
Formatting helpers for text reports and CSV emission.
"""
import os
from fractions import Fraction

import pandas as pd


def format_probability(value):
    """Render a probability as 'n/d (0.xxxxxx)'."""
    value = Fraction(value)
    return f"{format_rational(value)} ({float(value):.6f})"


def format_rational(value):
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text):
    """Parse '3/4', '0.25' or '1' as an exact Fraction (decimals stay exact)."""
    text = text.strip()
    return Fraction(text)


def aligned_table(df):
    """Left-aligned text rendering of a DataFrame with stable column widths."""
    if df.empty:
        return ["(empty)"]
    columns = list(df.columns)
    cells = [[str(v) for v in row] for row in df.itertuples(index=False)]
    widths = [max(len(col), *(len(r[i]) for r in cells)) for i, col in enumerate(columns)]
    lines = ["  ".join(col.ljust(w) for col, w in zip(columns, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    return lines


def emit_csv(df, path):
    """Write a DataFrame to CSV, creating the parent directory if needed."""
    directory = os.path.dirname(path)
    if directory and not os.path.exists(directory):
        os.makedirs(directory, exist_ok=True)
    df.to_csv(path, index=False, lineterminator="\n")


def frame(rows, columns):
    return pd.DataFrame(rows, columns=columns)
