import pytest

from kgrerank import (
    RecommendationList,
    Triple,
    build_catalog,
    induce_profile_subgraph,
)

T, A, G = "track", "artist", "genre"

# Catalog where a two-track profile (t1, t2 by artist a1, genre g1) can be
# extended either by "similar" candidates (s1, s2: more tracks by a1) or by
# "diverse" ones (d1, d2: new artists e1, e2 that also open alternative paths
# back into the profile). Extending with the diverse pair adds 4 nodes and 7
# edges; the similar pair adds 2 nodes and 2 edges.
DVS_TRIPLES = [
    Triple("t1", "maker", "a1", T, A),
    Triple("t1", "genre", "g1", T, G),
    Triple("t2", "maker", "a1", T, A),
    Triple("t2", "genre", "g1", T, G),
    Triple("s1", "maker", "a1", T, A),
    Triple("s2", "maker", "a1", T, A),
    Triple("d1", "maker", "e1", T, A),
    Triple("d1", "genre", "g1", T, G),
    Triple("e1", "genre", "g1", A, G),
    Triple("e1", "influenced_by", "a1", A, A),
    Triple("d2", "maker", "e2", T, A),
    Triple("d2", "genre", "g1", T, G),
    Triple("e2", "influenced_by", "a1", A, A),
]

# exact betweenness concentrations of the extended subgraphs
DVS_EXPECTED = {"d1": 10 / 49, "d2": 13 / 160, "s1": 73 / 288, "s2": 73 / 288}


@pytest.fixture(scope="session")
def dvs_catalog():
    return build_catalog(DVS_TRIPLES)


@pytest.fixture()
def dvs_profile(dvs_catalog):
    return induce_profile_subgraph(dvs_catalog, {"t1", "t2"}, user="u1")


@pytest.fixture()
def dvs_recs():
    # the base recommender prefers the similar items
    return RecommendationList(
        user="u1",
        items=(("s1", 0.9), ("s2", 0.8), ("d1", 0.4), ("d2", 0.3)),
    )


# The three-node catalog from a single enriched track: one track linked to its
# genre and its artist.
TRACK_TRIPLES = [
    Triple("t_4471632", "genre", "disco", T, G),
    Triple("t_4471632", "maker", "15160", T, A),
]


@pytest.fixture(scope="session")
def track_catalog():
    return build_catalog(TRACK_TRIPLES)


FEATURE_HEADER = (
    "track_id,danceability,energy,speechiness,acousticness,"
    "instrumentalness,liveness,valence,tempo"
)


@pytest.fixture()
def lastfm_files(tmp_path):
    """Five listening events; track tr4 has no feature row and is dropped."""
    events = tmp_path / "events.tsv"
    events.write_text(
        "u1\ta1\ttr1\t100\n"
        "u1\ta1\ttr2\t200\n"
        "u2\ta2\ttr3\t300\n"
        "u2\ta1\ttr1\t400\n"
        "u3\ta3\ttr4\t500\n",
        encoding="utf-8",
    )
    features = tmp_path / "features.csv"
    features.write_text(
        FEATURE_HEADER + "\n"
        "tr1,0.5,0.6,0.1,0.2,0.0,0.1,0.7,60\n"
        "tr2,0.4,0.5,0.2,0.3,0.1,0.2,0.6,120\n"
        "tr3,0.3,0.4,0.3,0.4,0.2,0.3,0.5,180\n",
        encoding="utf-8",
    )
    genres = tmp_path / "genres.csv"
    genres.write_text(
        "track_id,genre\ntr1,rock\ntr2,rock\n",
        encoding="utf-8",
    )
    return events, features, genres


NETFLIX_HEADER = (
    "show_id,type,title,director,cast,country,date_added,"
    "release_year,rating,duration,listed_in,description"
)

# hand-counted: 8 + 4 + 5 + 5 + 1 = 23 triples, 22 distinct nodes
@pytest.fixture()
def netflix_csv(tmp_path):
    path = tmp_path / "titles.csv"
    path.write_text(
        NETFLIX_HEADER + "\n"
        's1,Movie,Alpha,"D One, D Two","C One, C Two, C Three",United States,'
        "2021-01-01,2020,PG,90 min,Dramas,Small town drama\n"
        "s2,TV Show,Beta,,C One,,2021-02-01,2021,TV-MA,2 Seasons,"
        '"Dramas, Sci-Fi",Androids dream\n'
        's3,Movie,Gamma,D One,,"India, France",2021-03-01,2019,PG,100 min,'
        "Comedies,Mistaken identity\n"
        "s4,Movie,Delta,D Three,C Four,India,2021-04-01,2018,R,95 min,"
        "Dramas,Heist gone wrong\n"
        "s5,TV Show,Epsilon,,,,2021-05-01,2022,TV-PG,1 Season,,Quiet village\n",
        encoding="utf-8",
    )
    return path
