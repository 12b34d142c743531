"""Pick one representative subpage per (site, topic).  Candidates are ranked
by cosine-to-topic divided by token count, and a candidate whose first
subpath is a dictionary keyword is preferred over higher-ranked near misses.

Run with:  python3 demos/03_best_subpage.py
"""

from topicpages import (
    EmbeddingModel,
    TopicClassifier,
    extract_best_subpages,
    load_dictionary,
    normalize,
)
from topicpages.thresholds import DEFAULT_THRESHOLDS

DICTIONARY = """
{
  "topics": {
    "sports": ["sports", "cricket"],
    "politics": ["politics", "election"]
  },
  "generic_subpaths": ["topics"],
  "other_name": "other"
}
"""

VECTORS = {
    "sports": [1.0, 0.0],
    "cricket": [0.8, 0.6],
    "news": [0.0, 1.0],
    "politics": [0.0, 1.0],
    "election": [0.1, 0.9],
}

CANDIDATES = [
    "https://daily.example/sports/",
    "https://daily.example/sports/cricket/",
    "https://daily.example/cricket-news/",
    "https://daily.example/politics/",
    "https://daily.example/topics/election/",
]


def main() -> None:
    dictionary = load_dictionary(DICTIONARY)
    model = EmbeddingModel(2, VECTORS)
    classifier = TopicClassifier(dictionary, model, cutoff=0.4)

    sports = dictionary.topic_named("sports")
    print("selection weights for the sports candidates:")
    for raw in CANDIDATES[:3]:
        url = normalize(raw)
        w = classifier.selection_weight(url, sports)
        print(f"  {raw:44} weight={w:.4f}")

    # One call covers the whole site: classify, group by topic, pick winners.
    home = normalize("https://daily.example/")
    links = [normalize(u) for u in CANDIDATES]
    best = extract_best_subpages([(home, links)], dictionary, model, DEFAULT_THRESHOLDS)
    print("\nbest subpage per topic:")
    for row in best:
        for topic, url in sorted(row.selections.items(), key=lambda p: p[0].name):
            print(f"  {row.site:16} {topic.name:10} {url.normalized}")


if __name__ == "__main__":
    main()
