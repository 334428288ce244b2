"""Prompt template presets per dataset.

Multiple templates per class are encoded separately, mean-pooled, and
renormalized into one text feature per class.
"""

_IMAGENET_STYLE = [
    "a bad photo of the {}.",
    "a {} in a video game.",
    "a origami {}.",
    "a photo of the small {}.",
    "art of the {}.",
    "a photo of the large {}.",
    "itap of a {}.",
]

PRESETS: dict[str, list[str]] = {
    "toy": ["a photo of a {}."],
    "caltech101": ["a photo of a {}."],
    "dtd": ["{} texture."],
    "eurosat": ["a centered satellite photo of {}."],
    "aircraft": ["a photo of a {}, a type of aircraft."],
    "flowers102": ["a photo of a {}, a type of flower."],
    "food101": ["a photo of {}, a type of food."],
    "pets": ["a photo of a {}, a type of pet."],
    "cars": ["a photo of a {}, a type of car."],
    "ucf101": ["a photo of a person doing {}."],
    "sun397": _IMAGENET_STYLE,
    "imagenet": _IMAGENET_STYLE,
}


def prompt_templates(preset: str) -> list[str]:
    if preset not in PRESETS:
        raise KeyError(
            f"unknown dataset preset {preset!r}; available: {sorted(PRESETS)}"
        )
    return PRESETS[preset]
