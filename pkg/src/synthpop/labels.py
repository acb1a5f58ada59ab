"""Canonical vocabularies: activity labels, transport modes, location types.

Everything downstream of survey ingestion works in terms of the canonical
activity set ACTIVITIES; raw survey purpose strings are folded into it via
LABEL_SIMPLIFICATION. Location types are the five-way land-use
classification shared by meshblock categories and activity purposes.
"""

from __future__ import annotations

# Canonical activity set, alphabetical. Order is load-bearing: it fixes the
# row order of every distribution matrix.
ACTIVITIES: tuple[str, ...] = (
    "Home",
    "Mode Change",
    "Other",
    "Personal",
    "Pickup/Dropoff/Deliver",
    "Shop",
    "Social/Recreational",
    "Study",
    "With Someone",
    "Work",
)

ACTIVITY_INDEX = {a: i for i, a in enumerate(ACTIVITIES)}
HOME = "Home"
HOME_INDEX = ACTIVITY_INDEX[HOME]

# Raw survey purpose label -> canonical activity.
LABEL_SIMPLIFICATION = {
    "At Home": "Home",
    "Go Home": "Home",
    "Unknown Purpose (at start of day)": "Home",
    "Social": "Social/Recreational",
    "Recreational": "Social/Recreational",
    "Pick-up or Drop-off Someone": "Pickup/Dropoff/Deliver",
    "Pick-up or Deliver Something": "Pickup/Dropoff/Deliver",
    "Other Purpose": "Other",
    "Not Stated": "Other",
    "Personal Business": "Personal",
    "Work Related": "Work",
    "Education": "Study",
    "Buy Something": "Shop",
    "Change Mode": "Mode Change",
    "Accompany Someone": "With Someone",
}

MODES: tuple[str, ...] = ("walk", "cycle", "pt", "car")
MODE_INDEX = {m: i for i, m in enumerate(MODES)}
VEHICLE_MODES = frozenset({"car", "cycle"})

# Raw survey link-mode -> canonical mode. Lookup is case-insensitive on the
# stripped string; anything unmapped is dropped with a diagnostic.
MODE_RECLASSIFICATION = {
    "walk": "walk",
    "walking": "walk",
    "jogging": "walk",
    "bicycle": "cycle",
    "cycle": "cycle",
    "cycling": "cycle",
    "pt": "pt",
    "train": "pt",
    "tram": "pt",
    "public bus": "pt",
    "school bus": "pt",
    "bus": "pt",
    "car": "car",
    "vehicle driver": "car",
    "vehicle passenger": "car",
    "motorcycle": "car",
    "taxi": "car",
}

LOCATION_TYPES: tuple[str, ...] = ("home", "work", "education", "commercial", "park")

# Meshblock land-use category -> location types it provides. A meshblock
# category may feed more than one location type.
MESHBLOCK_TO_LOCATION = {
    "Residential": ("home",),
    "Other": ("home",),
    "Primary Production": ("home", "work"),
    "Commercial": ("work", "commercial"),
    "Education": ("work", "education"),
    "Hospital/Medical": ("work",),
    "Industrial": ("work",),
    "Parkland": ("park",),
    "Water": ("park",),
}

# Canonical activity -> location types it may take place at. Activities with
# more than one entry get a type sampled uniformly at assignment time.
# "Mode Change" is deliberately absent: it inherits region and type from the
# preceding stop.
ACTIVITY_TO_LOCATION = {
    "Home": ("home",),
    "Work": ("work",),
    "Study": ("education",),
    "Shop": ("commercial",),
    "Personal": ("commercial",),
    "Social/Recreational": ("commercial", "park"),
    "Other": ("work", "education", "commercial", "park"),
    "Pickup/Dropoff/Deliver": ("work", "education", "commercial", "park"),
    "With Someone": ("work", "education", "commercial", "park"),
}

GENDERS: tuple[str, ...] = ("female", "male")

_GENDER_ALIASES = {
    "f": "female", "female": "female", "woman": "female",
    "m": "male", "male": "male", "man": "male",
}


def canonical_gender(value: str) -> str | None:
    """Fold a raw gender string onto {female, male}; None if unrecognized."""
    return _GENDER_ALIASES.get(str(value).strip().lower())


def canonical_mode(value: str) -> str | None:
    """Fold a raw link-mode string onto MODES; None if unrecognized."""
    return MODE_RECLASSIFICATION.get(str(value).strip().lower())
