#!/usr/bin/env python3
"""Regenerates the bundled language-identification data under data/lid/.

Requires the `wordfreq` package. The outputs are committed, so this only needs
to run when the curated lists below or the noun dictionary change.

    python3 tools/data/build_lid_data.py [--root .]
"""
import argparse
import collections
import pathlib
import unicodedata

import wordfreq

TOP_N = 10000           # words per language that enter the wordlists
TRAIN_N = 30000         # words per language used to estimate trigram counts
HELDOUT_FROM = 30000    # held-out calibration words start at this rank
HELDOUT_SIZE = 1000
DOMINANCE = 5.0         # frequency ratio that resolves a word found in both lists

DETERMINERS = "el la los las un una unos unas".split()

# Tokens that are valid in both languages or carry no language on their own.
AMBIGUOUS = """
no ok okay me a ha ja jaja jajaja haha hahaha hmm mmm mm eh ah oh uh wow hey
x
""".split()

# Closed-class words and task vocabulary that must always resolve to Spanish.
SPANISH_FORCED = """
de que en y o u con por para sin hasta hacia desde entre sobre del al se lo le
les su sus mi mis tu tus yo es está están estoy estás eres soy son sí si pero
muy más ya aquí allí ahí donde dónde cuando cómo qué quién este esta esto ese
esa eso bien bueno buena gracias hola vale listo lista listos listas vamos voy
vas va baja bajo bajar sube subo subir izquierda derecha arriba abajo recto
paso pasos meta salida entiendo llegamos llegaste empezar empezamos jugar
amigo amiga debes estar ahora luego después otra vez dime
uno dos tres cuatro cinco seis siete ocho nueve diez once doce trece catorce
quince dieciséis diecisiete dieciocho diecinueve veinte
""".split() + DETERMINERS

# Task vocabulary that must always resolve to English.
ENGLISH_FORCED = """
the go going goes down up left right step steps start top begin let us we you
i am is are done ready hello hi there thanks which way understand do not sorry
reached goal got it now then again play nice to meet friend should be
one two three four five six seven eight nine ten eleven twelve thirteen
fourteen fifteen sixteen seventeen eighteen nineteen twenty
""".split()

# Post-nominal adjectives that mark a noun phrase as complex.
SPANISH_ADJECTIVES = """
grande grandes pequeño pequeña pequeños pequeñas chico chica chicos chicas
rojo roja rojos rojas azul azules verde verdes amarillo amarilla amarillos
amarillas blanco blanca blancos blancas negro negra negros negras gris grises
morado morada rosado rosada naranja anaranjado anaranjada café marrón
viejo vieja viejos viejas nuevo nueva nuevos nuevas alto alta altos altas
largo larga largos largas corto corta cortos cortas redondo redonda
bonito bonita bonitos bonitas feo fea lindo linda enorme enormes
gordo gorda flaco flaca dorado dorada oscuro oscura claro clara
mojado mojada seco seca roto rota abierto abierta cerrado cerrada
""".split()


def is_wordlike(w):
    if not w:
        return False
    core = w.replace("'", "")
    return bool(core) and all(unicodedata.category(c).startswith("L") for c in core)


def load_nouns(root):
    es, en = set(), set()
    for line in (root / "data/lexicon/nouns.tsv").read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        s, e, _ = line.split("\t")
        es.add(s)
        en.add(e)
    return es, en


def trigrams(word):
    padded = "^" + word + "$"
    return [padded[i:i + 3] for i in range(len(padded) - 2)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--root", default=".")
    args = ap.parse_args()
    root = pathlib.Path(args.root)
    out = root / "data/lid"
    out.mkdir(parents=True, exist_ok=True)

    noun_es, noun_en = load_nouns(root)
    top_en = [w for w in wordfreq.top_n_list("en", TOP_N) if is_wordlike(w)]
    top_es = [w for w in wordfreq.top_n_list("es", TOP_N) if is_wordlike(w)]
    set_en, set_es = set(top_en), set(top_es)

    english, spanish, ambiguous = set(), set(), set(AMBIGUOUS)
    for w in set_en | set_es:
        if w in ambiguous:
            continue
        if w in set_en and w in set_es:
            fe, fs = wordfreq.word_frequency(w, "en"), wordfreq.word_frequency(w, "es")
            if fs >= DOMINANCE * fe:
                spanish.add(w)
            elif fe >= DOMINANCE * fs:
                english.add(w)
            else:
                ambiguous.add(w)
        elif w in set_en:
            english.add(w)
        else:
            spanish.add(w)

    forced_es = set(SPANISH_FORCED) | noun_es | set(SPANISH_ADJECTIVES)
    forced_en = set(ENGLISH_FORCED) | noun_en
    clash = (forced_es & forced_en) - set(AMBIGUOUS)
    if clash:
        raise SystemExit(f"forced in both languages: {sorted(clash)}")
    for w in forced_es - set(AMBIGUOUS):
        english.discard(w)
        ambiguous.discard(w)
        spanish.add(w)
    for w in forced_en - set(AMBIGUOUS):
        spanish.discard(w)
        ambiguous.discard(w)
        english.add(w)
    english -= ambiguous
    spanish -= ambiguous

    def write_list(name, header, words):
        with open(out / name, "w", encoding="utf-8") as f:
            f.write(header)
            for w in sorted(words):
                f.write(w + "\n")

    write_list("english_words.txt", "# English wordlist (lowercase, one word per line)\n", english)
    write_list("spanish_words.txt", "# Spanish wordlist including closed-class words (lowercase)\n", spanish)
    write_list("ambiguous_words.txt", "# Tokens counted toward neither language\n", ambiguous)
    write_list("spanish_adjectives.txt", "# Post-nominal Spanish adjectives (complex noun phrase marker)\n",
               SPANISH_ADJECTIVES)

    train_en = [w for w in wordfreq.top_n_list("en", TRAIN_N) if is_wordlike(w)]
    train_es = [w for w in wordfreq.top_n_list("es", TRAIN_N) if is_wordlike(w)]
    for lang, words in (("en", train_en), ("es", train_es)):
        counts = collections.Counter(t for w in words for t in trigrams(w))
        with open(out / f"trigrams_{lang}.txt", "w", encoding="utf-8") as f:
            f.write(f"# character trigram counts over {len(words)} {lang} word types; '^' and '$' pad word edges\n")
            for t in sorted(counts):
                f.write(f"{t}\t{counts[t]}\n")

    wide_en = set(wordfreq.top_n_list("en", 60000))
    wide_es = set(wordfreq.top_n_list("es", 60000))
    for lang, other in (("en", wide_es), ("es", wide_en)):
        ranked = wordfreq.top_n_list(lang, HELDOUT_FROM + 5 * HELDOUT_SIZE)[HELDOUT_FROM:]
        held = [w for w in ranked if is_wordlike(w) and w not in other and "'" not in w][:HELDOUT_SIZE]
        write_list(f"heldout_{lang}.txt",
                   f"# held-out {lang} words for threshold calibration (absent from trigram training data)\n",
                   held)

    print(f"english={len(english)} spanish={len(spanish)} ambiguous={len(ambiguous)}")


if __name__ == "__main__":
    main()
