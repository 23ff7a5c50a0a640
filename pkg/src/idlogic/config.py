import os

DEFAULT_ENUMERATION_BUDGET = 2**20
DEFAULT_ATOM_BUDGET = 200_000


def _override():
    raw = os.environ.get("IDLOGIC_BUDGET")
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        return None


def enumeration_budget(budget=None):
    if budget is not None:
        return budget
    return _override() or DEFAULT_ENUMERATION_BUDGET


def atom_budget(budget=None):
    if budget is not None:
        return budget
    return _override() or DEFAULT_ATOM_BUDGET
