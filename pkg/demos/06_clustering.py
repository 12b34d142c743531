"""Cluster sites by their tracking or content profiles: PCA reduction,
seeded k-means, and model selection with silhouette and the gap statistic.

Run with:  python3 demos/06_clustering.py
"""

import numpy as np

from topicpages import gap_statistic, kmeans, model_select, pca_fit, silhouette


def main() -> None:
    # Three planted groups of "sites" in a 6-dimensional profile space.
    rng = np.random.default_rng(11)
    centers = np.array(
        [
            [5.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            [0.0, 5.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 5.0, 0.0, 0.0, 1.0],
        ]
    )
    X = np.vstack([c + rng.normal(scale=0.4, size=(15, 6)) for c in centers])

    model, reduced = pca_fit(X, 2)
    explained = float(np.sum(model.explained_variance_ratio))
    print(f"PCA to 2 components keeps {explained:.1%} of the variance")

    result = kmeans(reduced, k=3, seed=42, restarts=8)
    print(f"k-means (k=3): sse={result.sse:.3f} after {result.n_iter} iterations")
    print(f"assignments: {result.assignments.tolist()}")

    print("\nchoosing k:")
    for k in range(2, 6):
        labels = kmeans(reduced, k, seed=42, restarts=8).assignments
        sil = silhouette(reduced, labels)
        gap = gap_statistic(reduced, k, seed=42, b_refs=8, restarts=8)
        print(f"  k={k}: silhouette={sil:.3f}  gap={gap:.3f}")

    sweep = model_select(X, n_range=range(1, 4), k_range=range(2, 6), seed=42, restarts=4, b_refs=4)
    print("\nfull (n, k) sweep as CSV:")
    print(sweep.to_csv())


if __name__ == "__main__":
    main()
