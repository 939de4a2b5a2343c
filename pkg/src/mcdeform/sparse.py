"""Sparse vectors as ``{key: Fraction}`` dicts with zero entries dropped."""

from __future__ import annotations

from fractions import Fraction


def add_into(acc: dict, vec: dict, c=1) -> dict:
    """acc += c * vec, in place; returns acc."""
    if not c:
        return acc
    for k, v in vec.items():
        s = acc.get(k, 0) + c * v
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)
    return acc


def add_term(acc: dict, key, c) -> None:
    s = acc.get(key, 0) + c
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


def scaled(vec: dict, c) -> dict:
    if not c:
        return {}
    return {k: c * v for k, v in vec.items()}


def combine(*terms) -> dict:
    """Sum of ``(coefficient, vector)`` pairs."""
    out: dict = {}
    for c, vec in terms:
        add_into(out, vec, c)
    return out


def clean(vec: dict) -> dict:
    return {k: Fraction(v) for k, v in vec.items() if v}


def to_dense(vec: dict, n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for k, v in vec.items():
        out[k] = Fraction(v)
    return out


def to_sparse(vec) -> dict:
    return {k: Fraction(v) for k, v in enumerate(vec) if v}
