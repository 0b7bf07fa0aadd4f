"""Writes the bundled 20x20 maps under data/maps.

Each map is a start cell on the top row, a list of waypoints joined by
straight runs, and a landmark on every waypoint plus a few off-path
distractors. Landmark names come from data/lexicon/nouns.tsv.
"""
import csv
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parents[2]

MAPS = {
    "farm": {
        "start": (3, 0),
        "route": [((3, 5), "tenedor"), ((9, 5), "cuchara"), ((9, 11), "faro"), ((4, 11), "flores"),
                  ((4, 17), "granero"), ((12, 17), "tesoro")],
        "distractors": [((15, 3), "perro"), ((17, 9), "luna"), ((1, 14), "campana")],
    },
    "forest": {
        "start": (16, 0),
        "route": [((16, 4), "árbol"), ((10, 4), "cueva"), ((10, 10), "puente"), ((15, 10), "montaña"),
                  ((15, 16), "castillo"), ((7, 16), "bandera")],
        "distractors": [((3, 2), "zorro"), ((5, 12), "mariposa"), ((18, 19), "oso")],
    },
    "island": {
        "start": (9, 0),
        "route": [((9, 3), "pozo"), ((3, 3), "fuente"), ((3, 9), "barco"), ((13, 9), "isla"),
                  ((13, 14), "volcán"), ((6, 14), "estrella"), ((6, 18), "cohete")],
        "distractors": [((17, 2), "ballena"), ((1, 17), "cangrejo"), ((18, 17), "tortuga")],
    },
    "village": {
        "start": (1, 0),
        "route": [((1, 6), "cuchillo"), ((7, 6), "taza"), ((7, 2), "reloj"), ((14, 2), "llave"),
                  ((14, 12), "globo"), ((18, 12), "piedras"), ((18, 18), "corona")],
        "distractors": [((4, 15), "vaca"), ((10, 9), "espada"), ((16, 6), "gato")],
    },
}


def load_nouns():
    nouns = {}
    with open(ROOT / "data/lexicon/nouns.tsv", encoding="utf-8") as f:
        for row in csv.reader((line for line in f if not line.startswith("#")), delimiter="\t"):
            if row:
                nouns[row[0]] = (row[1], row[2])
    return nouns


def walk(start, waypoints):
    path = [start]
    for target in waypoints:
        x, y = path[-1]
        assert x == target[0] or y == target[1], (path[-1], target)
        while (x, y) != target:
            x += (target[0] > x) - (target[0] < x)
            y += (target[1] > y) - (target[1] < y)
            path.append((x, y))
    return path


def main():
    nouns = load_nouns()
    out_dir = ROOT / "data/maps"
    out_dir.mkdir(parents=True, exist_ok=True)
    for map_id, spec in MAPS.items():
        path = walk(spec["start"], [cell for cell, _ in spec["route"]])
        landmarks = []
        for cell, spanish in spec["route"] + spec["distractors"]:
            english, gender = nouns[spanish]
            landmarks.append({"english": english, "spanish": spanish, "gender": gender, "cell": list(cell)})
        doc = {
            "map_id": map_id,
            "width": 20,
            "height": 20,
            "start": list(spec["start"]),
            "end": list(path[-1]),
            "target_path": [list(c) for c in path],
            "landmarks": landmarks,
        }
        (out_dir / f"{map_id}.json").write_text(json.dumps(doc, ensure_ascii=False) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
