"""Named phi catalogues for the shipped tower presets.

The standard battery homogenizes indicator pairs whose seeds are base
residues, so each member is unit-homogeneous and Gamma invariant by
construction.  The negative control homogenizes a non-fixed seed without
symmetrizing over Gamma; it passes the homogeneity check but fails the
invariance precondition, which is exactly what the forced-mode mismatch
test wants.
"""
from . import locfun
from .locfun import LocFn
from .presets import TowerPreset
from .residue import ResidueRing

_FIXED_SEEDS = {
    "zeta9": (((1, 0, 0), (1, 0, 0)), ((2, 0, 0), (1, 0, 0)),
              ((1, 0, 0), (2, 0, 0)), ((4, 0, 0), (1, 0, 0)),
              ((2, 0, 0), (5, 0, 0))),
    "zeta7": (((1, 0, 0), (1, 0, 0)), ((2, 0, 0), (1, 0, 0)),
              ((1, 0, 0), (2, 0, 0)), ((4, 0, 0), (1, 0, 0)),
              ((5, 0, 0), (2, 0, 0))),
}
# c^2 against 1: not Gamma-fixed, and its plain homogenization genuinely
# breaks the congruence (sparser seeds can pass by accident)
_CONTROL_SEED = ((0, 0, 1), (1, 0, 0))

_ring_cache = {}


def level_ring(preset: TowerPreset) -> ResidueRing:
    if preset.name not in _ring_cache:
        _ring_cache[preset.name] = ResidueRing(preset.tower.top,
                                               preset.level_ideal())
    return _ring_cache[preset.name]


def build_phi(preset: TowerPreset, seed, k: int, symmetrize: bool = False,
              label: str | None = None) -> LocFn | None:
    """Homogenized (optionally Gamma-symmetrized) indicator for one seed."""
    ring = level_ring(preset)
    sx, sy = list(seed[0]), list(seed[1])
    if symmetrize:
        return locfun.symmetrized_indicator(ring, preset.tower,
                                            preset.top_units, sx, sy, k,
                                            label=label)
    x = ring.reduce_int(sx)
    y = ring.reduce_int(sy)
    return locfun.homogenized(ring, preset.top_units, {(x, y): 1}, k,
                              label=label or "phi")


def battery(preset: TowerPreset, k: int) -> list[LocFn]:
    """The standard five Gamma-invariant members at weight k."""
    seeds = _FIXED_SEEDS[preset.name]
    out = []
    for i, seed in enumerate(seeds):
        phi = build_phi(preset, seed, k,
                        label=f"fix{seed[0][0]}{seed[1][0]}k{k}")
        assert phi is not None, (preset.name, i, k)
        assert locfun.gamma_invariant(phi, preset.tower), (preset.name, i)
        out.append(phi)
    return out


def negative_control(preset: TowerPreset, k: int) -> LocFn:
    phi = build_phi(preset, _CONTROL_SEED, k, label=f"negctl-k{k}")
    assert phi is not None
    assert not locfun.gamma_invariant(phi, preset.tower), \
        "control seed unexpectedly invariant"
    return phi


def catalogue_names(preset: TowerPreset) -> list[str]:
    n = len(_FIXED_SEEDS.get(preset.name, ()))
    return ["battery", "negative-control"] + [f"battery{i}"
                                              for i in range(n)]


def resolve(preset: TowerPreset, name: str, k: int,
            custom: dict | None = None) -> list[LocFn]:
    """Phi list for a catalogue name, a single member, or a config entry."""
    if custom and name in custom:
        ent = custom[name]
        if ent.get("preset", preset.name) != preset.name:
            raise KeyError(f"battery {name!r} is for preset "
                           f"{ent['preset']!r}")
        out = []
        for i, seed in enumerate(ent["seeds"]):
            phi = build_phi(preset, seed, k,
                            symmetrize=ent.get("symmetrize", False),
                            label=f"{name}{i}k{k}")
            if phi is None:
                raise KeyError(f"battery {name!r} seed {i} collapses")
            out.append(phi)
        return out
    if name == "battery":
        return battery(preset, k)
    if name == "negative-control":
        return [negative_control(preset, k)]
    if name.startswith("battery") and name[7:].isdigit():
        i = int(name[7:])
        seeds = _FIXED_SEEDS[preset.name]
        if i >= len(seeds):
            raise KeyError(f"battery index {i} out of range")
        seed = seeds[i]
        phi = build_phi(preset, seed, k,
                        label=f"fix{seed[0][0]}{seed[1][0]}k{k}")
        assert phi is not None
        return [phi]
    raise KeyError(f"unknown phi catalogue entry {name!r}; "
                   f"have {catalogue_names(preset)}")
