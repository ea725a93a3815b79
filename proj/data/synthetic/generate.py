"""Regenerates the synthetic corpus in this directory (seeded, stable)."""
import csv
import json
import random

THEMES = {
    "analytics": ["Learning Analytics", "learning analytics", "Educational Data Mining", "clickstream",
                  "click stream", "Dropout Prediction", "MOOCs", "MOOC", "predictive modelling",
                  "Student Engagement"],
    "ai": ["Explainable AI (XAI)", "XAI", "Machine Learning", "deep learning", "Neural Networks",
           "artificial intelligence", "AI", "Intelligent Tutoring Systems", "knowledge tracing"],
    "hci": ["human centred computing", "Human-Centered Computing", "user studies", "Accessibility",
            "participatory design", "usability", "Interaction Design"],
    "genai": ["Generative Artificial Intelligence", "ChatGPT", "Large Language Models (LLMs)", "LLMs",
              "higher education", "Assessment", "feedback", "academic integrity"],
}
BRIDGES = ["higher education", "Student Engagement", "assessment", "Machine Learning", "Online Learning",
           "Collaborative Learning"]
VENUES = ["Computers & Education", "IEEE TLT", "BJET", "ETR&D", "IJAIED", "JLA", "L@S", "LAK"]


def main():
    rng = random.Random(2024)
    records = []
    for year in range(2019, 2024):
        themes = ["analytics", "ai", "hci"] + (["genai", "genai"] if year >= 2022 else [])
        for i in range(10):
            theme = rng.choice(themes)
            k = rng.randint(3, 6)
            words = rng.sample(THEMES[theme], min(k, len(THEMES[theme])))
            if rng.random() < 0.6:
                words.append(rng.choice(BRIDGES))
            if rng.random() < 0.3:
                other = rng.choice([t for t in themes if t != theme])
                words.append(rng.choice(THEMES[other]))
            records.append({"id": f"syn-{year}-{i:02d}", "venue": rng.choice(VENUES), "year": year,
                            "keywords": words})
    # Filter fodder: no keywords, too many keywords, a repeated keyword.
    records[3]["keywords"] = []
    records[17]["keywords"] = sorted({w for t in THEMES.values() for w in t})[:12]
    records[28]["keywords"].append(records[28]["keywords"][0])

    with open("articles.jsonl", "w", encoding="utf-8") as f:
        for r in records[:40]:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")
    with open("articles_extra.csv", "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "venue", "year", "keywords"])
        for r in records[40:]:
            w.writerow([r["id"], r["venue"], r["year"], "; ".join(r["keywords"])])


if __name__ == "__main__":
    main()
