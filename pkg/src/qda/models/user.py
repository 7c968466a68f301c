"""User-supplied targets: in-process plug-ins and the subprocess protocol.

A plug-in is a Python file defining ``dim`` (int), ``support`` (sequence of
"real" / "positive" / ("interval", low, high)), and ``neg_log_density(x)``.

The subprocess protocol is the portable baseline: the worker reads one line
of space-separated coordinates per evaluation from stdin and writes one line
back containing the negative log-density ("inf" for out-of-support points).
"""

from __future__ import annotations

import importlib.util
import subprocess
import threading

import numpy as np

from ..dacore import TargetDensity


def plugin_target(path: str, name: str = None) -> TargetDensity:
    spec = importlib.util.spec_from_file_location("qda_user_plugin", path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    for attr in ("dim", "support", "neg_log_density"):
        if not hasattr(module, attr):
            raise ValueError(f"plug-in {path!r} must define {attr}")
    support = tuple(tuple(s) if isinstance(s, (list, tuple)) else s for s in module.support)
    return TargetDensity(
        neg_log_density=module.neg_log_density,
        dim=int(module.dim),
        support=support,
        name=name or f"plugin:{path}",
        neg_log_density_batch=getattr(module, "neg_log_density_batch", None),
    )


class _SubprocessEvaluator:
    def __init__(self, command):
        self.command = list(command)
        self.proc = None
        self.lock = threading.Lock()  # one pipe: serialize concurrent callers

    def _ensure(self):
        if self.proc is None or self.proc.poll() is not None:
            self.proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )

    def __call__(self, x) -> float:
        line = " ".join(f"{v:.17g}" for v in np.asarray(x, dtype=np.float64))
        with self.lock:
            self._ensure()
            self.proc.stdin.write(line + "\n")
            self.proc.stdin.flush()
            reply = self.proc.stdout.readline()
        if not reply:
            raise RuntimeError(f"target subprocess {self.command!r} closed its output")
        return float(reply.strip())

    def close(self):
        if self.proc is not None and self.proc.poll() is None:
            self.proc.stdin.close()
            self.proc.wait(timeout=5)


def subprocess_target(command, dim: int, support=None, name: str = None) -> TargetDensity:
    """Wrap an external evaluator speaking the line protocol.

    The child process is started lazily and kept alive across evaluations.
    """
    support = tuple(support) if support is not None else ("real",) * dim
    evaluator = _SubprocessEvaluator(command)
    target = TargetDensity(
        neg_log_density=evaluator,
        dim=dim,
        support=support,
        name=name or f"subprocess:{command[0]}",
    )
    target.close = evaluator.close
    return target
