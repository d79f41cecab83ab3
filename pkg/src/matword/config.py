"""Process-wide runtime knobs.

The thread count is a hint consumed where a backend offers parallelism;
all numerical results are deterministic regardless of its value.  CLI
``--threads`` wins over the MATWORD_THREADS environment variable; 0 means
automatic.
"""

from __future__ import annotations

import os

_threads = 0


def set_threads(count: int):
    global _threads
    if count < 0:
        raise ValueError("thread count must be >= 0")
    _threads = count


def get_threads() -> int:
    if _threads:
        return _threads
    env = os.environ.get("MATWORD_THREADS", "")
    if env.isdigit():
        return int(env)
    return 0
