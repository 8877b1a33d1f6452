"""Data-literacy question generation and grading.

Answer keys are derived with exact rational arithmetic so grading is never
ambiguous, and every generated question can be re-keyed from its payload.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from .errors import DegenerateDistributionError, ResponseShapeError

DATASET_MIN_LEN = 4
DATASET_MAX_LEN = 12
VALUE_MIN = 0
VALUE_MAX = 99

SKEW_EPSILON = Fraction(15, 100)  # mean-median margin, in standard deviations


class QuestionKind(Enum):
    MEAN = "mean"
    MEDIAN = "median"
    MODE = "mode"
    SKEW_CLASS = "skew_class"
    OUTLIER_PICK = "outlier_pick"
    COORDINATE_POINT = "coordinate_point"
    NUMERIC_COUNT = "numeric_count"


class SkewClass(Enum):
    LEFT_SKEWED = "left_skewed"
    SYMMETRIC = "symmetric"
    RIGHT_SKEWED = "right_skewed"


SKEW_LABELS = {
    SkewClass.LEFT_SKEWED: "Left-skewed",
    SkewClass.SYMMETRIC: "Symmetric",
    SkewClass.RIGHT_SKEWED: "Right-skewed",
}

Response = Union[Set[int], int, Tuple[int, int]]


def validate_dataset(values: Sequence[int]) -> None:
    if not DATASET_MIN_LEN <= len(values) <= DATASET_MAX_LEN:
        raise ValueError(f"dataset length {len(values)} outside "
                         f"[{DATASET_MIN_LEN}, {DATASET_MAX_LEN}]")
    for v in values:
        if not isinstance(v, int) or not VALUE_MIN <= v <= VALUE_MAX:
            raise ValueError(f"dataset value {v!r} outside [{VALUE_MIN}, {VALUE_MAX}]")


def mean(values: Sequence[int]) -> Fraction:
    validate_dataset(values)
    return Fraction(sum(values), len(values))


def median(values: Sequence[int]) -> Fraction:
    validate_dataset(values)
    ordered = sorted(values)
    n = len(ordered)
    if n % 2 == 1:
        return Fraction(ordered[n // 2])
    return Fraction(ordered[n // 2 - 1] + ordered[n // 2], 2)


def mode(values: Sequence[int]) -> Optional[int]:
    """Unique most frequent value, or None when the maximum multiplicity ties."""
    validate_dataset(values)
    counts: Dict[int, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    best = max(counts.values())
    winners = [v for v, c in counts.items() if c == best]
    return winners[0] if len(winners) == 1 else None


def _variance(values: Sequence[int]) -> Fraction:
    m = Fraction(sum(values), len(values))
    return sum((Fraction(v) - m) ** 2 for v in values) / len(values)


def classify_skew(values: Sequence[int],
                  epsilon: Fraction = SKEW_EPSILON) -> SkewClass:
    """Pedagogical mean-vs-median skew rule, exact.

    Right-skewed iff mean - median > epsilon * stddev (population), mirrored
    on the left; symmetric otherwise. Comparison is done on squares to stay
    in rational arithmetic.
    """
    validate_dataset(values)
    if len(set(values)) == 1:
        raise DegenerateDistributionError("all dataset values are equal")
    d = mean(values) - median(values)
    margin_sq = epsilon * epsilon * _variance(values)
    if d > 0 and d * d > margin_sq:
        return SkewClass.RIGHT_SKEWED
    if d < 0 and d * d > margin_sq:
        return SkewClass.LEFT_SKEWED
    return SkewClass.SYMMETRIC


def _quartiles(values: Sequence[int]) -> Tuple[Fraction, Fraction]:
    """Q1/Q3 by the median-of-halves rule (overall median excluded when odd)."""
    ordered = sorted(values)
    n = len(ordered)
    half = n // 2
    lower = ordered[:half]
    upper = ordered[n - half:]

    def _med(part: List[int]) -> Fraction:
        m = len(part)
        if m % 2 == 1:
            return Fraction(part[m // 2])
        return Fraction(part[m // 2 - 1] + part[m // 2], 2)

    return _med(lower), _med(upper)


def find_outliers(values: Sequence[int]) -> Set[int]:
    """Indices outside the 1.5*IQR box-plot fences."""
    validate_dataset(values)
    q1, q3 = _quartiles(values)
    iqr = q3 - q1
    lo = q1 - Fraction(3, 2) * iqr
    hi = q3 + Fraction(3, 2) * iqr
    return {i for i, v in enumerate(values) if v < lo or v > hi}


def _format_fraction(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return str(float(f))


@dataclass(frozen=True)
class Question:
    id: str
    kind: QuestionKind
    prompt: str
    payload: dict
    options: List[str]
    # Option index set for choice questions, an exact integer for
    # NUMERIC_COUNT, a grid point for COORDINATE_POINT.
    correct: Union[frozenset, int, Tuple[int, int]]

    def to_record(self) -> dict:
        if isinstance(self.correct, frozenset):
            correct = sorted(self.correct)
        elif isinstance(self.correct, tuple):
            correct = list(self.correct)
        else:
            correct = self.correct
        return {
            "id": self.id,
            "kind": self.kind.value,
            "prompt": self.prompt,
            "payload": self.payload,
            "options": self.options,
            "correct": correct,
        }


@dataclass(frozen=True)
class GradeResult:
    correct: bool
    expected: object
    received: object


_COUNT_RANGE_BY_DIFFICULTY = {1: (1, 5), 2: (1, 7), 3: (1, 10)}


def _dataset_params(difficulty: int) -> Tuple[int, int, int]:
    """(length_lo, length_hi, value_hi) per difficulty band."""
    return {
        1: (4, 6, 12),
        2: (5, 8, 30),
        3: (7, 12, 99),
    }[difficulty]


def _rng(seed: int, kind: QuestionKind, difficulty: int) -> random.Random:
    return random.Random(f"{seed}:{kind.value}:{difficulty}")


def _random_dataset(rng: random.Random, difficulty: int) -> List[int]:
    lo, hi, vmax = _dataset_params(difficulty)
    n = rng.randint(lo, hi)
    return [rng.randint(0, vmax) for _ in range(n)]


def _distractors(rng: random.Random, correct_value: Fraction,
                 pool: List[Fraction], want: int) -> List[Fraction]:
    candidates = [correct_value + d for d in (-2, -1, 1, 2)] + pool
    out: List[Fraction] = []
    for c in candidates:
        if c != correct_value and c >= 0 and c not in out:
            out.append(c)
    rng.shuffle(out)
    return out[:want]


def _choice_question(rng: random.Random, qid: str, kind: QuestionKind,
                     prompt: str, values: List[int],
                     correct_value: Fraction) -> Question:
    pool = [mean(values), median(values)]
    m = mode(values)
    if m is not None:
        pool.append(Fraction(m))
    distractors = _distractors(rng, correct_value, pool, want=3)
    option_values = distractors + [correct_value]
    rng.shuffle(option_values)
    options = [_format_fraction(v) for v in option_values]
    correct = frozenset({option_values.index(correct_value)})
    return Question(qid, kind, prompt, {"values": list(values)}, options, correct)


def gen_question(rng_seed: int, kind: QuestionKind, difficulty: int = 1) -> Question:
    """Deterministically generate a question with a verified answer key."""
    if difficulty not in (1, 2, 3):
        raise ValueError(f"difficulty {difficulty} outside [1, 3]")
    rng = _rng(rng_seed, kind, difficulty)
    qid = f"{kind.value}-{difficulty}-{rng_seed}"

    if kind in (QuestionKind.MEAN, QuestionKind.MEDIAN, QuestionKind.MODE):
        while True:
            values = _random_dataset(rng, difficulty)
            if kind is QuestionKind.MEAN:
                # Nudge the last value so the mean is an integer.
                rem = sum(values) % len(values)
                values[-1] -= rem
                if values[-1] < 0:
                    values[-1] += len(values)
                key = mean(values)
                prompt = "Catch the mean of the data set"
            elif kind is QuestionKind.MEDIAN:
                key = median(values)
                prompt = "Catch the median of the data set"
            else:
                if mode(values) is None:
                    continue
                key = Fraction(mode(values))
                prompt = "Catch the mode of the data set"
            try:
                validate_dataset(values)
            except ValueError:
                continue
            return _choice_question(rng, qid, kind, prompt, values, key)

    if kind is QuestionKind.SKEW_CLASS:
        while True:
            values = _random_dataset(rng, difficulty)
            if len(set(values)) == 1:
                continue
            skew = classify_skew(values)
            options = [SKEW_LABELS[SkewClass.LEFT_SKEWED],
                       SKEW_LABELS[SkewClass.SYMMETRIC],
                       SKEW_LABELS[SkewClass.RIGHT_SKEWED]]
            correct = frozenset({[SkewClass.LEFT_SKEWED, SkewClass.SYMMETRIC,
                                  SkewClass.RIGHT_SKEWED].index(skew)})
            return Question(qid, kind, "How is this data set skewed?",
                            {"values": values}, options, correct)

    if kind is QuestionKind.OUTLIER_PICK:
        lo, hi, vmax = _dataset_params(difficulty)
        while True:
            # Tight cluster plus one planted extreme so outliers exist.
            n = rng.randint(max(lo, 5), hi)
            center = rng.randint(8, 40)
            spread = rng.randint(1, 4)
            values = [max(0, min(VALUE_MAX, center + rng.randint(-spread, spread)))
                      for _ in range(n)]
            values[rng.randrange(n)] = min(VALUE_MAX,
                                           center + spread + rng.randint(20, 50))
            outliers = find_outliers(values)
            if outliers and len(outliers) < len(values):
                options = [str(v) for v in values]
                return Question(qid, kind, "Ditch the outliers out of the box",
                                {"values": values}, options, frozenset(outliers))

    if kind is QuestionKind.COORDINATE_POINT:
        side = {1: 5, 2: 8, 3: 10}[difficulty]
        point = (rng.randrange(side), rng.randrange(side))
        candidates = {point}
        while len(candidates) < 4:
            candidates.add((rng.randrange(side), rng.randrange(side)))
        ordered = sorted(candidates)
        options = [f"({gx}, {gy})" for gx, gy in ordered]
        return Question(qid, kind, f"Move the cursor to ({point[0]}, {point[1]})",
                        {"grid": [side, side], "point": [point[0], point[1]]},
                        options, point)

    if kind is QuestionKind.NUMERIC_COUNT:
        lo_ans, hi_ans = _COUNT_RANGE_BY_DIFFICULTY[difficulty]
        while True:
            values = _random_dataset(rng, difficulty)
            threshold = rng.randint(0, max(values))
            answer = sum(1 for v in values if v > threshold)
            if lo_ans <= answer <= hi_ans:
                break
        option_values = sorted({answer, max(1, answer - 1), answer + 1,
                                answer + 2})
        options = [str(v) for v in option_values]
        return Question(
            qid, kind,
            f"Raise your knee once for every value greater than {threshold}",
            {"values": values, "op": "gt", "threshold": threshold},
            options, answer)

    raise ValueError(f"unknown question kind {kind!r}")


def derive_key(question: Question):
    """Recompute the answer key from the payload alone."""
    kind = question.kind
    payload = question.payload
    if kind in (QuestionKind.MEAN, QuestionKind.MEDIAN, QuestionKind.MODE):
        values = payload["values"]
        if kind is QuestionKind.MEAN:
            key = mean(values)
        elif kind is QuestionKind.MEDIAN:
            key = median(values)
        else:
            key = Fraction(mode(values))
        return frozenset({question.options.index(_format_fraction(key))})
    if kind is QuestionKind.SKEW_CLASS:
        skew = classify_skew(payload["values"])
        return frozenset({question.options.index(SKEW_LABELS[skew])})
    if kind is QuestionKind.OUTLIER_PICK:
        return frozenset(find_outliers(payload["values"]))
    if kind is QuestionKind.COORDINATE_POINT:
        return tuple(payload["point"])
    if kind is QuestionKind.NUMERIC_COUNT:
        threshold = payload["threshold"]
        return sum(1 for v in payload["values"] if v > threshold)
    raise ValueError(f"unknown question kind {kind!r}")


def grade(question: Question, response: Response) -> GradeResult:
    """Compare a response against the key; raises ResponseShapeError on
    type mismatch."""
    kind = question.kind
    if kind is QuestionKind.NUMERIC_COUNT:
        if isinstance(response, bool) or not isinstance(response, int):
            raise ResponseShapeError(f"{kind.value} expects an integer")
        expected = question.correct
        return GradeResult(response == expected, expected, response)
    if kind is QuestionKind.COORDINATE_POINT:
        if (not isinstance(response, (tuple, list)) or len(response) != 2
                or not all(isinstance(v, int) for v in response)):
            raise ResponseShapeError(f"{kind.value} expects a grid point")
        expected = tuple(question.correct)
        return GradeResult(tuple(response) == expected, expected, tuple(response))
    if not isinstance(response, (set, frozenset)):
        raise ResponseShapeError(f"{kind.value} expects a set of option indices")
    for idx in response:
        if isinstance(idx, bool) or not isinstance(idx, int):
            raise ResponseShapeError("option indices must be integers")
    expected = set(question.correct)
    return GradeResult(set(response) == expected, expected, set(response))
