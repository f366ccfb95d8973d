"""Hex winner prediction with an interpretable Tsetlin Machine.

Thin wrapper over the C++ extension. Methods that produce structured
results in the C++ API return JSON text there; here they return dicts.
"""

import json as _json

from ._hextm import (  # noqa: F401
    Board,
    ContractViolation,
    InvalidEncoding,
    Model,
    ParseError,
    Record,
    RejectedMove,
    TerminalState,
    TMConfig,
    decode,
    encode,
    generate_dataset,
    read_dataset,
    run_cli,
    write_dataset,
)


def predict(model, board):
    """{"label", "voteSum", "margin"} for a board."""
    return _json.loads(model.predict(board))


def interpret(model, board):
    """Per-cell literal counts of the clauses that fire on a board."""
    return _json.loads(model.interpret(board))


def top_clauses(model, records, polarity="positive", k=10, alpha=10.0):
    """Highest scoring clauses of one polarity, scored on `records`."""
    return _json.loads(model.top_clauses(records, polarity, k, alpha))


def evaluate(model, records):
    """Accuracy report of a model on records."""
    return _json.loads(model.evaluate(records))
