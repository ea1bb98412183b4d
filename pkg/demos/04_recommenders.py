"""Base recommenders: implicit counts to ratings, biases, item-kNN, run files.

The re-ranking layer treats the recommender as a black box, so any system
that can emit a flat run file plugs in. Two simple built-ins keep the
pipeline self-contained.
"""

import tempfile
from pathlib import Path

from kgrerank import (
    BaselineRecommender,
    Interaction,
    ItemKnnRecommender,
    anti_testset,
    load_external_recommendations,
    scale_ratings,
    write_recommendations,
)

# Play counts become explicit ratings per user: the most-played item maps to
# 1000, the least-played to 1.
interactions = [
    Interaction("ana", "t1", 40), Interaction("ana", "t2", 10),
    Interaction("ana", "t3", 1),
    Interaction("bob", "t2", 7), Interaction("bob", "t3", 7),
    Interaction("bob", "t4", 21),
    Interaction("cat", "t1", 3), Interaction("cat", "t4", 9),
    Interaction("cat", "t5", 27),
]
matrix = scale_ratings(interactions)
print("ana's scaled ratings:",
      {i: round(matrix.rating('ana', i), 1) for i in sorted(matrix.user_ratings('ana'))})

# The candidate pool for a user is everything rated by anyone that the user
# has not rated themselves.
print("ana's anti-testset:", sorted(anti_testset(matrix, "ana")))

# Bias baseline: global mean plus user and item deviations.
baseline = BaselineRecommender().fit(matrix)
print("\nbaseline predictions for ana:")
for item in sorted(anti_testset(matrix, "ana")):
    print(f"  {item}: {baseline.predict('ana', item):7.1f}")

# Item-kNN with cosine similarity over co-rating users; falls back to the
# baseline when no neighbor overlaps.
knn = ItemKnnRecommender(k=10).fit(matrix)
print("sim(t2, t3) =", round(knn.similarity("t2", "t3"), 4))
print("knn predictions for ana:",
      {i: round(knn.predict('ana', i), 1) for i in sorted(anti_testset(matrix, 'ana'))})

# Recommendation lists are sorted, truncated, and re-loadable from disk.
lists = {user: baseline.recommend(user, n=3) for user in matrix.users()}
print("\ntop-3 lists from the baseline model:")
for user, lst in lists.items():
    print(f"  {user}: {', '.join(lst.item_ids())}")

with tempfile.TemporaryDirectory() as tmp:
    run_path = Path(tmp) / "base_run.txt"
    write_recommendations(lists, run_path)
    print("\nrun file contents:")
    print(run_path.read_text(encoding="utf-8"))
    reloaded = load_external_recommendations(run_path)
    assert reloaded["ana"].items == lists["ana"].items
    print("round-trip through the run format: ok")
