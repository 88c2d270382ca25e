"""Deterministic toy tasks sized so the full stack overfits on a CPU in seconds.

Three supervised sets mirror the production tasks: 50 sentences over 5
frames, 80 over 4 source domains (each carrying a synthetic frame
distribution peaked on the domain's home frame), and 40 literal or
metaphorical sentences in matched pairs. Cue words carry the signal;
subjects and objects separate literal from figurative use.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

FRAME_LABELS = ["Filling", "Invading", "Animals", "Motion", "Attack"]
DOMAIN_LABELS = ["WATER", "WAR", "ANIMAL", "DISEASE"]

FRAME_CUES = {
    "Filling": ["flood", "pour", "fill", "spill", "drench"],
    "Invading": ["invade", "occupy", "storm", "raid", "overrun"],
    "Animals": ["swarm", "prowl", "graze", "stampede", "nest"],
    "Motion": ["drift", "slide", "bounce", "glide", "tumble"],
    "Attack": ["strike", "assault", "ambush", "besiege", "bombard"],
}

DOMAIN_CUES = {
    "WATER": ["flood", "pour", "spill", "drip", "surge"],
    "WAR": ["invade", "besiege", "ambush", "bombard", "raid"],
    "ANIMAL": ["swarm", "prowl", "graze", "stampede", "hiss"],
    "DISEASE": ["infect", "plague", "fester", "sicken", "contaminate"],
}

# home frame evoked by each domain's cues, for the synthetic distributions
DOMAIN_HOME_FRAME = {
    "WATER": "Filling",
    "WAR": "Invading",
    "ANIMAL": "Animals",
    "DISEASE": "Attack",
}

LITERAL_SUBJECTS = {
    "WATER": "the spring rains",
    "WAR": "the enemy troops",
    "ANIMAL": "the wild bees",
    "DISEASE": "the new germs",
}

METAPHOR_SUBJECTS = {
    "WATER": "angry headlines",
    "WAR": "rising prices",
    "ANIMAL": "online rumors",
    "DISEASE": "idle doubts",
}

_FRAME_TEMPLATES = [
    "they {} the northern valley every spring",
    "witnesses saw the crowds {} the old square at dawn",
]

_DOMAIN_TOPICS = ["migrants", "prices", "rumours", "tourists"]


@dataclass(frozen=True)
class ToyExample:
    sentence: str
    target: str
    label: str


@dataclass(frozen=True)
class ToyDomainExample:
    sentence: str
    target: str
    label: str
    frame_dist: tuple[float, ...]


@dataclass(frozen=True)
class ToyMetaphorExample:
    sentence: str
    target: str
    is_metaphor: bool


def frame_examples() -> list[ToyExample]:
    examples = []
    for label in FRAME_LABELS:
        for cue in FRAME_CUES[label]:
            for template in _FRAME_TEMPLATES:
                examples.append(ToyExample(template.format(cue), cue, label))
    return examples


def _home_distribution(label: str) -> tuple[float, ...]:
    # 0.7 on the home frame, the remaining 0.3 spread over all 5
    home = DOMAIN_HOME_FRAME[label]
    spread = 0.3 / len(FRAME_LABELS)
    return tuple(
        0.7 + spread if frame == home else spread for frame in FRAME_LABELS
    )


def domain_examples() -> list[ToyDomainExample]:
    examples = []
    for label in DOMAIN_LABELS:
        dist = _home_distribution(label)
        for cue in DOMAIN_CUES[label]:
            for topic in _DOMAIN_TOPICS:
                sentence = f"the {topic} {cue} the city centre"
                examples.append(ToyDomainExample(sentence, cue, label, dist))
    return examples


def metaphor_examples() -> list[ToyMetaphorExample]:
    examples = []
    for label in DOMAIN_LABELS:
        for cue in DOMAIN_CUES[label]:
            literal = f"{LITERAL_SUBJECTS[label]} {cue} the quiet village"
            figurative = f"{METAPHOR_SUBJECTS[label]} {cue} the public mood"
            examples.append(ToyMetaphorExample(literal, cue, False))
            examples.append(ToyMetaphorExample(figurative, cue, True))
    return examples


def target_lexicon() -> list[str]:
    cues = {cue for cues in DOMAIN_CUES.values() for cue in cues}
    return sorted(cues)


def write_taxonomy(labels: list[str], path: str | Path) -> None:
    Path(path).write_text("".join(label + "\n" for label in labels), encoding="utf-8")


def demo_documents() -> list[dict]:
    """A few documents in the interchange shape, salted with cue words."""
    texts = [
        "critics say cheap imports flood the local market and drown small firms",
        "viral posts swarm the feeds while moderators prowl the comment threads",
        "fresh doubts infect the campaign and old grudges fester in the ranks",
        "the committee met on tuesday and approved the budget without debate",
    ]
    return [
        {"id": f"demo-{i}", "text": text, "partition": "demo"}
        for i, text in enumerate(texts)
    ]
