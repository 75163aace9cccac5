import sys
from datetime import datetime

from tqdm import tqdm

_VERBOSE = True


def set_verbosity(verbose):
    global _VERBOSE
    _VERBOSE = bool(verbose)


def print_status(message, important=False):
    """Print a status message with timestamp.

    Status output goes to stderr; stdout is reserved for reports so that
    identical inputs give byte-identical reports.
    """
    if not _VERBOSE:
        return
    timestamp = datetime.now().strftime("%H:%M:%S")
    if important:
        print(f"\n[{timestamp}] {'='*30} {message} {'='*30}", file=sys.stderr)
    else:
        print(f"[{timestamp}] {message}", file=sys.stderr)
    sys.stderr.flush()


def print_warning(message):
    # Warnings are shown even in quiet mode
    print(f"Warning: {message}", file=sys.stderr)
    sys.stderr.flush()


def progress(iterable, desc, total=None):
    """Wrap a Monte-Carlo loop in a tqdm bar on stderr (silent when quiet)."""
    return tqdm(iterable, desc=desc, total=total, file=sys.stderr,
                disable=not _VERBOSE, leave=False)
