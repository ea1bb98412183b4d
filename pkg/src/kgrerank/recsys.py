"""Base recommenders over implicit feedback, plus the external-list adapter.

Play counts (or watch flags) are scaled per user into explicit ratings in
[1, 1000] by min-max normalization. Two simple rating models are provided: a
global-mean-plus-biases baseline and item-based kNN with cosine similarity.
Recommendation lists from any external system can be loaded from a flat run
file instead, since the re-ranking layer treats the recommender as a black box.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from .rerank import RecommendationList

RATING_MIN = 1.0
RATING_MAX = 1000.0


class NotFittedError(RuntimeError):
    """A model method that requires fitting was called before ``fit``."""


class RunFileError(ValueError):
    """A recommendation run file violates the expected format."""


@dataclass(frozen=True)
class Interaction:
    """One aggregated user-item interaction (play count or watch flag)."""

    user: str
    item: str
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"interaction count must be >= 1, got {self.count}")


class RatingMatrix:
    """Sparse user-item rating matrix with values in [1, 1000]."""

    def __init__(self, ratings: Mapping[str, Mapping[str, float]]):
        self._by_user: dict[str, dict[str, float]] = {}
        self._by_item: dict[str, dict[str, float]] = {}
        for user in sorted(ratings):
            row = ratings[user]
            if not row:
                continue
            for item in sorted(row):
                value = float(row[item])
                if not RATING_MIN <= value <= RATING_MAX:
                    raise ValueError(
                        f"rating {value!r} for ({user!r}, {item!r}) outside "
                        f"[{RATING_MIN}, {RATING_MAX}]"
                    )
                self._by_user.setdefault(user, {})[item] = value
                self._by_item.setdefault(item, {})[user] = value

    def users(self) -> list[str]:
        return list(self._by_user)

    def items(self) -> list[str]:
        return sorted(self._by_item)

    def has_user(self, user: str) -> bool:
        return user in self._by_user

    def has_item(self, item: str) -> bool:
        return item in self._by_item

    def rating(self, user: str, item: str) -> float | None:
        return self._by_user.get(user, {}).get(item)

    def user_ratings(self, user: str) -> Mapping[str, float]:
        try:
            return self._by_user[user]
        except KeyError:
            raise KeyError(f"unknown user {user!r}") from None

    def item_ratings(self, item: str) -> Mapping[str, float]:
        try:
            return self._by_item[item]
        except KeyError:
            raise KeyError(f"unknown item {item!r}") from None

    def rated_items(self) -> set[str]:
        """Items carrying at least one rating from anyone."""
        return set(self._by_item)

    @property
    def n_ratings(self) -> int:
        return sum(len(row) for row in self._by_user.values())


def scale_ratings(interactions: Iterable[Interaction]) -> RatingMatrix:
    """Turn per-user interaction counts into explicit ratings in [1, 1000].

    Per user: rating = 1 + 999 * (count - min) / (max - min), so the user's
    most-interacted item always rates 1000. When all counts are equal every
    item is the user's most-interacted one and rates 1000. Duplicate
    (user, item) pairs are aggregated by summing counts first.
    """
    counts: dict[str, dict[str, int]] = {}
    for interaction in interactions:
        row = counts.setdefault(interaction.user, {})
        row[interaction.item] = row.get(interaction.item, 0) + interaction.count

    ratings: dict[str, dict[str, float]] = {}
    for user in sorted(counts):
        row = counts[user]
        low = min(row.values())
        high = max(row.values())
        if high == low:
            ratings[user] = {item: RATING_MAX for item in row}
        else:
            span = high - low
            ratings[user] = {
                item: RATING_MIN + (RATING_MAX - RATING_MIN) * (c - low) / span
                for item, c in row.items()
            }
    return RatingMatrix(ratings)


def anti_testset(matrix: RatingMatrix, user: str) -> set[str]:
    """All items rated by anyone, minus the items this user has rated.

    Unknown users get the full rated-item set (they have rated nothing).
    """
    rated_by_user = (
        set(matrix.user_ratings(user)) if matrix.has_user(user) else set()
    )
    return matrix.rated_items() - rated_by_user


def _clamp(value: float) -> float:
    return min(RATING_MAX, max(RATING_MIN, value))


class _RatingRecommender:
    """Shared recommend() logic for models exposing predict(user, item)."""

    _matrix: RatingMatrix | None = None

    def _require_fitted(self) -> RatingMatrix:
        if self._matrix is None:
            raise NotFittedError(f"{type(self).__name__} is not fitted")
        return self._matrix

    def predict(self, user: str, item: str) -> float:  # pragma: no cover
        raise NotImplementedError

    def recommend(self, user: str, n: int = 100) -> RecommendationList:
        """Top-n predictions on the user's anti-testset, best first.

        Ties on the predicted rating break on the item id so the output is
        stable across runs. Items the user has already rated never appear.
        """
        matrix = self._require_fitted()
        if not matrix.has_user(user):
            raise ValueError(f"unknown user {user!r}")
        candidates = sorted(anti_testset(matrix, user))
        scored = sorted(
            ((self.predict(user, item), item) for item in candidates),
            key=lambda pair: (-pair[0], pair[1]),
        )
        return RecommendationList(
            user=user, items=tuple((item, score) for score, item in scored[:n])
        )


class BaselineRecommender(_RatingRecommender):
    """Rating baseline: global mean plus user and item bias terms.

    Biases are fitted by alternating regularized averages: each pass solves
    the item biases given the user biases and vice versa, with an L2 damping
    term in the denominator. At convergence this is the minimizer of the
    damped squared-error objective.
    """

    def __init__(self, epochs: int = 10, damping: float = 10.0):
        self.epochs = epochs
        self.damping = damping
        self._matrix: RatingMatrix | None = None
        self._mu = 0.0
        self._user_bias: dict[str, float] = {}
        self._item_bias: dict[str, float] = {}

    def fit(self, matrix: RatingMatrix) -> "BaselineRecommender":
        self._matrix = matrix
        users = sorted(matrix.users())
        items = matrix.items()
        total = 0.0
        count = 0
        for user in users:
            for item in sorted(matrix.user_ratings(user)):
                total += matrix.user_ratings(user)[item]
                count += 1
        self._mu = total / count if count else 0.0
        bu = dict.fromkeys(users, 0.0)
        bi = dict.fromkeys(items, 0.0)
        for _ in range(self.epochs):
            for item in items:
                raters = matrix.item_ratings(item)
                residual = sum(
                    raters[u] - self._mu - bu[u] for u in sorted(raters)
                )
                bi[item] = residual / (self.damping + len(raters))
            for user in users:
                rated = matrix.user_ratings(user)
                residual = sum(
                    rated[i] - self._mu - bi[i] for i in sorted(rated)
                )
                bu[user] = residual / (self.damping + len(rated))
        self._user_bias = bu
        self._item_bias = bi
        return self

    def predict(self, user: str, item: str) -> float:
        """mu + b_user + b_item, clamped to the rating range.

        Unknown users or items contribute a zero bias.
        """
        self._require_fitted()
        return _clamp(
            self._mu
            + self._user_bias.get(user, 0.0)
            + self._item_bias.get(item, 0.0)
        )


class ItemKnnRecommender(_RatingRecommender):
    """Item-based kNN over cosine similarity of co-rating users.

    Similarity between two items uses only the users who rated both, in both
    the numerator and the norms, which makes the similarity matrix symmetric
    with a unit diagonal for any item having at least one rater. Prediction is
    the similarity-weighted mean of the user's ratings on the k most similar
    items; with no usable neighbor it falls back to the bias baseline.
    """

    def __init__(self, k: int = 40, epochs: int = 10, damping: float = 10.0):
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        self.k = k
        self._matrix: RatingMatrix | None = None
        self._sims: dict[str, dict[str, float]] = {}
        self._fallback = BaselineRecommender(epochs=epochs, damping=damping)

    def fit(self, matrix: RatingMatrix) -> "ItemKnnRecommender":
        self._matrix = matrix
        self._fallback.fit(matrix)
        dot: dict[tuple[str, str], float] = {}
        left: dict[tuple[str, str], float] = {}
        right: dict[tuple[str, str], float] = {}
        for user in sorted(matrix.users()):
            rated = matrix.user_ratings(user)
            items = sorted(rated)
            for a in range(len(items)):
                ia = items[a]
                ra = rated[ia]
                for b in range(a + 1, len(items)):
                    ib = items[b]
                    rb = rated[ib]
                    key = (ia, ib)
                    dot[key] = dot.get(key, 0.0) + ra * rb
                    left[key] = left.get(key, 0.0) + ra * ra
                    right[key] = right.get(key, 0.0) + rb * rb
        sims: dict[str, dict[str, float]] = {item: {} for item in matrix.items()}
        for item in matrix.items():
            if matrix.item_ratings(item):
                sims[item][item] = 1.0
        for (ia, ib), numerator in dot.items():
            denominator = math.sqrt(left[(ia, ib)] * right[(ia, ib)])
            if denominator > 0:
                value = numerator / denominator
                sims[ia][ib] = value
                sims[ib][ia] = value
        self._sims = sims
        return self

    def similarity(self, a: str, b: str) -> float:
        """Cosine similarity over co-rating users; 0 without common raters."""
        if self._matrix is None:
            raise NotFittedError(f"{type(self).__name__} is not fitted")
        return self._sims.get(a, {}).get(b, 0.0)

    def predict(self, user: str, item: str) -> float:
        matrix = self._require_fitted()
        ratings = matrix.user_ratings(user) if matrix.has_user(user) else {}
        item_sims = self._sims.get(item, {})
        neighbors = [
            (item_sims[other], other, rating)
            for other, rating in sorted(ratings.items())
            if other != item and item_sims.get(other, 0.0) > 0
        ]
        if not neighbors:
            return self._fallback.predict(user, item)
        neighbors.sort(key=lambda t: (-t[0], t[1]))
        top = neighbors[: self.k]
        weight = sum(sim for sim, _, _ in top)
        return sum(sim * rating for sim, _, rating in top) / weight


def write_recommendations(
    lists: Mapping[str, RecommendationList], path
) -> None:
    """Write per-user recommendation lists in the flat run format.

    One line per item: ``<user_id> <rank> <item_id> <score>``, rank 1-based,
    scores non-increasing per user, users in sorted order. UTF-8 with LF line
    endings; scores are written with full round-trip precision.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for user in sorted(lists):
            for rank, (item, score) in enumerate(lists[user].items, start=1):
                fh.write(f"{user} {rank} {item} {score!r}\n")


def load_external_recommendations(path) -> dict[str, RecommendationList]:
    """Parse a run file of externally computed recommendation lists.

    Validates the format line by line: four whitespace-separated fields,
    ranks counting up from 1 per user, and non-increasing scores per user.
    Violations raise :class:`RunFileError` with the line number.
    """
    pending: dict[str, list[tuple[str, float]]] = {}
    next_rank: dict[str, int] = {}
    last_score: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 4:
                raise RunFileError(
                    f"{path}:{lineno}: expected 4 fields, got {len(parts)}"
                )
            user, rank_text, item, score_text = parts
            try:
                rank = int(rank_text)
                score = float(score_text)
            except ValueError:
                raise RunFileError(
                    f"{path}:{lineno}: rank/score are not numeric"
                ) from None
            expected = next_rank.get(user, 1)
            if rank != expected:
                raise RunFileError(
                    f"{path}:{lineno}: rank {rank} for user {user!r}, "
                    f"expected {expected}"
                )
            if user in last_score and score > last_score[user]:
                raise RunFileError(
                    f"{path}:{lineno}: score {score!r} increases for user {user!r}"
                )
            next_rank[user] = expected + 1
            last_score[user] = score
            pending.setdefault(user, []).append((item, score))
    out: dict[str, RecommendationList] = {}
    for user, items in pending.items():
        try:
            out[user] = RecommendationList(user=user, items=tuple(items))
        except ValueError as exc:
            raise RunFileError(f"{path}: user {user!r}: {exc}") from None
    return out
