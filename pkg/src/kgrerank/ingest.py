"""Dataset loading: listening histories, title catalogs, synthetic profiles.

The music pipeline merges three tabular sources (listening events, acoustic
features, genre annotations) into aggregated interactions, catalog triples and
a per-track feature store. The movie/TV pipeline reads a titles CSV into
triples and structured records. Synthetic generation covers both user
profiles over an existing catalog and a fully self-contained two-cluster
dataset used by the bundled experiments. All sampling is seeded and
reproducible bit for bit.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .evaluation import FEATURE_NAMES, FeatureVector
from .graph import CatalogGraph, EntityKind, Node, Triple
from .recsys import Interaction

log = logging.getLogger(__name__)


class IngestError(ValueError):
    """Raised for malformed or inconsistent input data."""


@dataclass(frozen=True)
class ListeningEvent:
    user: str
    artist: str
    track: str
    timestamp: int


@dataclass(frozen=True)
class TitleRecord:
    show_id: str
    type_: str
    title: str
    directors: tuple[str, ...]
    cast: tuple[str, ...]
    countries: tuple[str, ...]
    release_year: int | None
    rating: str
    duration: str
    genres: tuple[str, ...]
    description: str


@dataclass(frozen=True)
class SyntheticProfileConfig:
    n_profiles: int
    min_items: int
    max_items: int
    seed: int

    def __post_init__(self) -> None:
        if self.n_profiles < 1:
            raise ValueError("n_profiles must be >= 1")
        if not 1 <= self.min_items <= self.max_items:
            raise ValueError(
                f"need 1 <= min_items <= max_items, got "
                f"[{self.min_items}, {self.max_items}]"
            )


@dataclass
class MergeStats:
    events: int = 0
    users: int = 0
    artists: int = 0
    tracks: int = 0
    genres: int = 0


@dataclass
class MergeResult:
    """Joined dataset: interactions, catalog triples and the feature store."""

    interactions: list[Interaction]
    triples: list[Triple]
    features: dict[str, FeatureVector]
    stats: MergeStats
    dropped_events: int = 0
    summary: list[dict] = field(default_factory=list)


def track_node_id(raw_track_id: str) -> str:
    return f"t_{raw_track_id}"


def _read_tsv_events(path) -> Iterable[ListeningEvent]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise IngestError(
                    f"{path}:{lineno}: expected 4 tab-separated fields, "
                    f"got {len(parts)}"
                )
            user, artist, track, ts = parts
            if not user or not artist or not track:
                raise IngestError(f"{path}:{lineno}: empty id field")
            try:
                timestamp = int(ts)
            except ValueError:
                raise IngestError(
                    f"{path}:{lineno}: timestamp {ts!r} is not an integer"
                ) from None
            yield ListeningEvent(user, artist, track, timestamp)


def _require_columns(path, fieldnames, required: Sequence[str]) -> None:
    missing = [c for c in required if c not in (fieldnames or [])]
    if missing:
        raise IngestError(f"{path}: missing required columns: {missing}")


def _read_features_csv(path) -> dict[str, list[float]]:
    """Track id -> raw feature values in FEATURE_NAMES order (tempo unscaled)."""
    out: dict[str, list[float]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        _require_columns(path, reader.fieldnames, ["track_id", *FEATURE_NAMES])
        for lineno, row in enumerate(reader, start=2):
            track = row["track_id"].strip()
            if not track:
                raise IngestError(f"{path}:{lineno}: empty track_id")
            try:
                out[track] = [float(row[name]) for name in FEATURE_NAMES]
            except ValueError:
                raise IngestError(
                    f"{path}:{lineno}: non-numeric feature value"
                ) from None
    return out


def _read_genres_csv(path) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        _require_columns(path, reader.fieldnames, ["track_id", "genre"])
        for row in reader:
            track = row["track_id"].strip()
            genre = row["genre"].strip()
            if track and genre:
                genres = out.setdefault(track, [])
                if genre not in genres:
                    genres.append(genre)
    return out


def merge_lastfm(events_path, features_path, genres_path=None) -> MergeResult:
    """Join listening events with acoustic features and genre annotations.

    Only tracks present in both the events and the features survive; genre
    annotations are optional per track (a left join). Events for dropped
    tracks are counted, not silently discarded. Tempo arrives on its raw scale
    and is min-max normalized over the surviving tracks; a track whose scaled
    vector is all-zero is rejected here so distance measures stay defined.
    """
    raw_features = _read_features_csv(features_path)
    genres = _read_genres_csv(genres_path) if genres_path else {}

    counts: dict[tuple[str, str], int] = {}
    track_artist: dict[str, str] = {}
    events_read = 0
    for event in _read_tsv_events(events_path):
        events_read += 1
        counts[(event.user, event.track)] = (
            counts.get((event.user, event.track), 0) + 1
        )
        track_artist.setdefault(event.track, event.artist)

    candidates = sorted(set(track_artist) & set(raw_features))
    summary: list[dict] = [
        {"stage": "merge", "count": events_read, "reason": "events read"}
    ]

    # tempo min-max over the joined tracks
    survivors: list[str] = []
    features: dict[str, FeatureVector] = {}
    zero_norm = 0
    if candidates:
        tempos = [raw_features[t][FEATURE_NAMES.index("tempo")] for t in candidates]
        t_low, t_high = min(tempos), max(tempos)
        span = t_high - t_low
        for track in candidates:
            values = list(raw_features[track])
            tempo = values[FEATURE_NAMES.index("tempo")]
            values[FEATURE_NAMES.index("tempo")] = (
                (tempo - t_low) / span if span > 0 else 0.0
            )
            try:
                vector = FeatureVector.from_iterable(values)
            except ValueError as exc:
                raise IngestError(f"track {track!r}: {exc}") from None
            if all(v == 0.0 for v in values):
                zero_norm += 1
                continue
            survivors.append(track)
            features[track_node_id(track)] = vector

    surviving = set(survivors)
    interactions: list[Interaction] = []
    kept_events = 0
    for (user, track), count in sorted(counts.items()):
        if track in surviving:
            interactions.append(Interaction(user, track_node_id(track), count))
            kept_events += count
    dropped_events = events_read - kept_events

    triples: list[Triple] = []
    genre_names: set[str] = set()
    artist_ids: set[str] = set()
    for track in survivors:
        node = track_node_id(track)
        artist = track_artist[track]
        artist_ids.add(artist)
        triples.append(
            Triple(node, "maker", artist, EntityKind.TRACK, EntityKind.ARTIST)
        )
        for genre in genres.get(track, []):
            genre_names.add(genre)
            triples.append(
                Triple(node, "genre", genre, EntityKind.TRACK, EntityKind.GENRE)
            )

    stats = MergeStats(
        events=kept_events,
        users=len({i.user for i in interactions}),
        artists=len(artist_ids),
        tracks=len(survivors),
        genres=len(genre_names),
    )
    summary.extend(
        [
            {"stage": "merge", "count": kept_events, "reason": "events kept"},
            {
                "stage": "merge",
                "count": dropped_events,
                "reason": "events dropped (track missing from a required source)",
            },
            {
                "stage": "merge",
                "count": zero_norm,
                "reason": "tracks dropped (zero-norm feature vector)",
            },
            {"stage": "merge", "count": len(survivors), "reason": "tracks kept"},
        ]
    )
    return MergeResult(
        interactions=interactions,
        triples=triples,
        features=features,
        stats=stats,
        dropped_events=dropped_events,
        summary=summary,
    )


def sample_users(
    interactions: Iterable[Interaction],
    n: int,
    min_unique_tracks: int,
    seed: int,
) -> set[str]:
    """Seeded uniform sample of n users having enough distinct items.

    Raises with the eligible/requested counts when too few users qualify.
    """
    uniques: dict[str, set[str]] = {}
    for interaction in interactions:
        uniques.setdefault(interaction.user, set()).add(interaction.item)
    eligible = sorted(u for u, items in uniques.items() if len(items) >= min_unique_tracks)
    if len(eligible) < n:
        raise IngestError(
            f"only {len(eligible)} users have >= {min_unique_tracks} unique "
            f"items, cannot sample {n}"
        )
    rng = random.Random(seed)
    return set(rng.sample(eligible, n))


_NETFLIX_COLUMNS = [
    "show_id",
    "type",
    "title",
    "director",
    "cast",
    "country",
    "release_year",
    "rating",
    "duration",
    "listed_in",
    "description",
]


def _split_cell(cell: str) -> list[str]:
    return [part.strip() for part in cell.split(",") if part.strip()]


def load_netflix(path) -> tuple[list[Triple], list[TitleRecord]]:
    """Read a titles CSV into catalog triples and structured records.

    Directors and cast become person nodes pointing at the title (``directs``
    and ``acts_on``); countries, genres and the rating label hang off the
    title. Multi-valued cells are comma-split and trimmed; empty cells are
    skipped silently. Kind follows the ``type`` column (movie or TV show).
    """
    triples: list[Triple] = []
    records: list[TitleRecord] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        _require_columns(path, reader.fieldnames, _NETFLIX_COLUMNS)
        for lineno, row in enumerate(reader, start=2):
            show_id = row["show_id"].strip()
            type_ = row["type"].strip()
            if not show_id:
                raise IngestError(f"{path}:{lineno}: empty show_id")
            if type_ == "Movie":
                kind = EntityKind.MOVIE
            elif type_ == "TV Show":
                kind = EntityKind.TV_SHOW
            else:
                raise IngestError(
                    f"{path}:{lineno}: type must be 'Movie' or 'TV Show', "
                    f"got {type_!r}"
                )
            title = row["title"].strip()
            directors = _split_cell(row["director"])
            cast = _split_cell(row["cast"])
            countries = _split_cell(row["country"])
            genres = _split_cell(row["listed_in"])
            rating = row["rating"].strip()
            year_text = row["release_year"].strip()
            year = int(year_text) if year_text.lstrip("-").isdigit() else None
            records.append(
                TitleRecord(
                    show_id=show_id,
                    type_=type_,
                    title=title,
                    directors=tuple(directors),
                    cast=tuple(cast),
                    countries=tuple(countries),
                    release_year=year,
                    rating=rating,
                    duration=row["duration"].strip(),
                    genres=tuple(genres),
                    description=row["description"].strip(),
                )
            )
            title_attrs = {"title": title} if title else None
            for person in directors:
                triples.append(
                    Triple(
                        person, "directs", show_id,
                        EntityKind.PERSON, kind, target_attrs=title_attrs,
                    )
                )
            for person in cast:
                triples.append(
                    Triple(
                        person, "acts_on", show_id,
                        EntityKind.PERSON, kind, target_attrs=title_attrs,
                    )
                )
            for country in countries:
                triples.append(
                    Triple(
                        show_id, "country_of_origin", country,
                        kind, EntityKind.COUNTRY, source_attrs=title_attrs,
                    )
                )
            for genre in genres:
                triples.append(
                    Triple(
                        show_id, "genre", genre,
                        kind, EntityKind.GENRE, source_attrs=title_attrs,
                    )
                )
            if rating:
                triples.append(
                    Triple(
                        show_id, "rated", rating,
                        kind, EntityKind.RATING, source_attrs=title_attrs,
                    )
                )
    return triples, records


def title_nodes(records: Iterable[TitleRecord]) -> list[Node]:
    """Seed nodes for every title, so relation-free titles still appear."""
    out = []
    for record in records:
        kind = EntityKind.MOVIE if record.type_ == "Movie" else EntityKind.TV_SHOW
        attrs = {"title": record.title} if record.title else {}
        out.append(Node(record.show_id, kind, attrs))
    return out


def generate_profiles(
    catalog: CatalogGraph, cfg: SyntheticProfileConfig
) -> list[set[str]]:
    """Random user histories sampled without replacement from recommendables.

    Sizes are uniform in [min_items, max_items]; output is deterministic for a
    fixed seed.
    """
    pool = sorted(catalog.recommendable)
    if cfg.max_items > len(pool):
        raise IngestError(
            f"max_items {cfg.max_items} exceeds the {len(pool)} recommendable items"
        )
    rng = random.Random(cfg.seed)
    profiles = []
    for _ in range(cfg.n_profiles):
        size = rng.randint(cfg.min_items, cfg.max_items)
        profiles.append(set(rng.sample(pool, size)))
    return profiles


def split_interactions(
    history: Iterable[str], ratio: float, seed: int
) -> tuple[list[str], list[str]]:
    """Shuffle a history under the seed and split it train/test by the ratio.

    The train size is the ratio rounded half-up, then adjusted so that both
    sides are non-empty whenever the history has at least two items. A
    single-item history goes entirely to train with a warning.
    """
    if not 0.0 < ratio < 1.0:
        raise IngestError(f"split ratio must lie in (0, 1), got {ratio!r}")
    items = sorted(set(history))
    n = len(items)
    if n == 0:
        return [], []
    if n == 1:
        log.warning("history of size 1: placing the item in train, test is empty")
        return items, []
    rng = random.Random(seed)
    rng.shuffle(items)
    n_train = math.floor(ratio * n + 0.5)
    n_train = max(1, min(n - 1, n_train))
    return items[:n_train], items[n_train:]


def write_summary(rows: Iterable[dict], path) -> None:
    """Append-style machine-readable ingest summary, one JSON object per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")


@dataclass(frozen=True)
class SyntheticConfig:
    """Knobs for the self-contained two-cluster dataset.

    Tracks split evenly into two acoustic clusters with well-separated
    feature prototypes. Every track has its own artist and one cluster genre,
    users listen mostly inside the first cluster (``minority_share`` of each
    history comes from the second), and play counts are higher for the
    preferred cluster.
    """

    n_tracks: int = 200
    n_users: int = 20
    history_size: int = 24
    minority_share: float = 0.1
    seed: int = 7

    def __post_init__(self) -> None:
        if self.n_tracks < 4:
            raise ValueError("n_tracks must be >= 4")
        if self.n_users < 1:
            raise ValueError("n_users must be >= 1")
        if not 0.0 <= self.minority_share < 1.0:
            raise ValueError("minority_share must lie in [0, 1)")
        if not 2 <= self.history_size <= self.n_tracks:
            raise ValueError("history_size must lie in [2, n_tracks]")


_CLUSTER_A_PROTOTYPE = (0.85, 0.80, 0.75, 0.80, 0.10, 0.15, 0.10, 0.20)
_CLUSTER_B_PROTOTYPE = (0.15, 0.10, 0.20, 0.10, 0.85, 0.80, 0.90, 0.75)


def make_synthetic_dataset(cfg: SyntheticConfig) -> MergeResult:
    """Generate the two-cluster dataset in the same shape as a merged corpus."""
    rng = random.Random(cfg.seed)
    half = cfg.n_tracks // 2
    track_ids = [f"t_a{i:04d}" for i in range(half)] + [
        f"t_b{i:04d}" for i in range(cfg.n_tracks - half)
    ]
    cluster_a = set(track_ids[:half])

    triples: list[Triple] = []
    features: dict[str, FeatureVector] = {}
    for track in track_ids:
        in_a = track in cluster_a
        artist = "art_" + track[2:]
        genre = "g_alpha" if in_a else "g_beta"
        triples.append(
            Triple(track, "maker", artist, EntityKind.TRACK, EntityKind.ARTIST)
        )
        triples.append(
            Triple(track, "genre", genre, EntityKind.TRACK, EntityKind.GENRE)
        )
        prototype = _CLUSTER_A_PROTOTYPE if in_a else _CLUSTER_B_PROTOTYPE
        values = [
            min(0.99, max(0.01, p + rng.uniform(-0.05, 0.05))) for p in prototype
        ]
        features[track] = FeatureVector.from_iterable(values)

    a_tracks = sorted(cluster_a)
    b_tracks = sorted(set(track_ids) - cluster_a)
    n_minority = max(1, round(cfg.minority_share * cfg.history_size))
    n_minority = min(n_minority, cfg.history_size - 1, len(b_tracks))
    n_majority = min(cfg.history_size - n_minority, len(a_tracks))

    interactions: list[Interaction] = []
    for u in range(cfg.n_users):
        user = f"u{u:03d}"
        majority = rng.sample(a_tracks, n_majority)
        minority = rng.sample(b_tracks, n_minority)
        for track in sorted(majority):
            interactions.append(Interaction(user, track, rng.randint(5, 50)))
        for track in sorted(minority):
            interactions.append(Interaction(user, track, rng.randint(1, 3)))

    stats = MergeStats(
        events=sum(i.count for i in interactions),
        users=cfg.n_users,
        artists=cfg.n_tracks,
        tracks=cfg.n_tracks,
        genres=2,
    )
    summary = [
        {"stage": "synthetic", "count": cfg.n_tracks, "reason": "tracks generated"},
        {"stage": "synthetic", "count": cfg.n_users, "reason": "users generated"},
        {
            "stage": "synthetic",
            "count": len(interactions),
            "reason": "interactions generated",
        },
    ]
    return MergeResult(
        interactions=interactions,
        triples=triples,
        features=features,
        stats=stats,
        dropped_events=0,
        summary=summary,
    )
