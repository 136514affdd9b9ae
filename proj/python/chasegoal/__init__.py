"""Goal-driven query answering for existential rules with equality.

    >>> import chasegoal
    >>> r = chasegoal.run("A(?x) -> Q(?x)", {"A": [["a"]]}, "Q")
    >>> r.answers
    [('a',)]
"""

from ._chasegoal import Error, GuardError, Report, StageInfo, run, run_files

MODES = ("mat", "rel", "magic", "all")

__all__ = ["Error", "GuardError", "MODES", "Report", "StageInfo", "run", "run_files"]
