"""Seeded generator for small synthetic publication corpora.

The corpus imitates how co-authorship grows in practice. Researchers belong
to groups; a group is a senior researcher plus a few juniors. Before the
cutoff each junior mostly publishes with the senior of the group. After the
cutoff the juniors of a group start writing with each other, and a few
collaborations across groups appear as noise. Three venue series exist, one
edition per year each; one of them is the focus series.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .ingest import DatasetManifest, PublicationRecord

SERIES = {"swc": "Semantic Web Conference", "dbc": "Data Base Conference", "mlc": "Machine Learning Conference"}
FOCUS = "swc"

_FIRST = ["Ada", "Ben", "Cleo", "Dan", "Eva", "Finn", "Gia", "Hugo", "Ines", "Jon", "Kai", "Lea",
          "Max", "Nia", "Otto", "Pia", "Quinn", "Rosa", "Sam", "Tia", "Uwe", "Vera", "Wim", "Xia",
          "Yann", "Zoe"]
_LAST = ["Abel", "Berg", "Cruz", "Dietz", "Eck", "Falk", "Gross", "Hahn", "Iver", "Jung", "Klein",
         "Lang", "Mohr", "Nagel", "Ost", "Pohl", "Rau", "Seidel", "Thiel", "Vogt", "Wolf", "Zell"]


@dataclass(frozen=True)
class CorpusSpec:
    n_groups: int = 16
    juniors_per_group: tuple[int, int] = (2, 4)
    first_year: int = 2010
    cutoff_year: int = 2016
    last_year: int = 2018
    papers_per_junior: tuple[int, int] = (2, 4)
    senior_solo_papers: tuple[int, int] = (0, 2)
    future_papers_per_group: tuple[int, int] = (1, 2)
    noise_papers: int = 8
    focus_share: float = 0.75
    seed: int = 2016


def _venue(series: str, year: int) -> tuple[str, str]:
    return f"v:{series}-{year}", f"{SERIES[series]} {year}"


def generate_corpus(spec: CorpusSpec = CorpusSpec()) -> tuple[list[PublicationRecord], DatasetManifest]:
    rng = random.Random(spec.seed)
    names: dict[str, str] = {}
    groups: list[tuple[str, list[str]]] = []
    home: dict[str, str] = {}
    counter = 0

    def person() -> str:
        nonlocal counter
        rid = f"r:{counter:03d}"
        names[rid] = f"{_FIRST[counter % len(_FIRST)]} {_LAST[(counter * 7) % len(_LAST)]}"
        counter += 1
        return rid

    for g in range(spec.n_groups):
        senior = person()
        juniors = [person() for _ in range(rng.randint(*spec.juniors_per_group))]
        groups.append((senior, juniors))
        home[senior] = FOCUS if g % 3 != 2 else rng.choice(["dbc", "mlc"])

    records: list[PublicationRecord] = []

    def publish(authors: list[str], year: int, series: str) -> None:
        vid, vname = _venue(series, year)
        pid = f"p:{len(records):04d}"
        title = "On " + " and ".join(names[a].split()[1] for a in authors[:2])
        records.append(PublicationRecord(pid, title, tuple((a, names[a]) for a in authors), vid, vname, year))

    past = range(spec.first_year, spec.cutoff_year + 1)
    future = range(spec.cutoff_year + 1, spec.last_year + 1)
    for senior, juniors in groups:
        for junior in juniors:
            for _ in range(rng.randint(*spec.papers_per_junior)):
                series = home[senior] if rng.random() < spec.focus_share else rng.choice(sorted(SERIES))
                publish([senior, junior], rng.choice(past), series)
        for _ in range(rng.randint(*spec.senior_solo_papers)):
            publish([senior], rng.choice(past), rng.choice(sorted(SERIES)))
        for _ in range(rng.randint(*spec.future_papers_per_group)):
            pair = rng.sample(juniors, 2)
            authors = pair + ([senior] if rng.random() < 0.5 else [])
            publish(authors, rng.choice(future), home[senior])

    everyone = sorted(names)
    for _ in range(spec.noise_papers):
        publish(rng.sample(everyone, 2), rng.choice(list(past) + list(future)), rng.choice(sorted(SERIES)))

    venues = {s: [_venue(s, y)[0] for y in range(spec.first_year, spec.last_year + 1)] for s in SERIES}
    manifest = DatasetManifest(
        focus_venue_series=frozenset(venues[FOCUS]),
        record_count=len(records),
        source_description=f"synthetic corpus, seed {spec.seed}",
        series={s: tuple(v) for s, v in venues.items()},
    )
    return records, manifest
