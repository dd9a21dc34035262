"""Shared fixtures and random-instance generators."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from mtp.terms import NIL, ONE, TAU, Action, Choice, Prefix
from mtp.traceclasses import validate_interface

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS


def random_process(rng: random.Random, names, size: int):
    """A rec-free sequential process with at most ``size`` prefixes."""
    if size <= 0:
        return rng.choice([NIL, NIL, ONE])
    shape = rng.random()
    if shape < 0.15:
        return rng.choice([NIL, ONE])
    if shape < 0.75:
        action = TAU if rng.random() < 0.25 else Action(rng.choice(names), rng.random() < 0.5)
        return Prefix(action, random_process(rng, names, size - 1))
    left_size = rng.randint(0, size - 1)
    return Choice(
        random_process(rng, names, left_size),
        random_process(rng, names, size - 1 - left_size),
    )


def random_interface(rng: random.Random, names, n_parts: int):
    """A complement-closed partition of ``names`` into ``n_parts`` groups."""
    names = list(names)
    rng.shuffle(names)
    n_parts = min(n_parts, len(names))
    # every part gets one name, the rest are spread at random
    groups = [[names[i]] for i in range(n_parts)]
    for name in names[n_parts:]:
        rng.choice(groups).append(name)
    return validate_interface([[Action(n) for n in group] for group in groups])


def split_one_part(rng: random.Random, interface):
    """A strict refinement of ``interface``, or None if every part is a
    single channel already."""
    parts = [sorted({a.name for a in part}) for part in interface.parts]
    splittable = [i for i, names in enumerate(parts) if len(names) > 1]
    if not splittable:
        return None
    i = rng.choice(splittable)
    names = parts[i]
    cut = rng.randint(1, len(names) - 1)
    new_parts = parts[:i] + [names[:cut], names[cut:]] + parts[i + 1:]
    return validate_interface([[Action(n) for n in group] for group in new_parts])
