"""Built-in fields and cyclic towers.

All shipped data lives in data/presets.json; this module turns it into
validated FieldOrder / TowerData objects and caches them per process.
"""
import json
from dataclasses import dataclass
from pathlib import Path

from .nfcore import (CMQuadExt, Element, FieldOrder, IdealLattice,
                     UnitGroupData, factor_rational_prime)
from .towers import TowerData

_DATA_PATH = Path(__file__).parent / "data" / "presets.json"
_raw = None
_field_cache = {}
_tower_cache = {}


def _data():
    global _raw
    if _raw is None:
        with open(_DATA_PATH) as fh:
            _raw = json.load(fh)
    return _raw


def extend_catalogue(fields=None, towers=None):
    """Merge extra preset tables over the shipped ones; clears caches."""
    data = _data()
    for name, ent in (fields or {}).items():
        data["fields"][name] = ent
    for name, ent in (towers or {}).items():
        data["towers"][name] = ent
    _field_cache.clear()
    _tower_cache.clear()


@dataclass(frozen=True)
class FieldPreset:
    name: str
    order: FieldOrder
    units: UnitGroupData


@dataclass(frozen=True)
class TowerPreset:
    name: str
    tower: TowerData
    level: int
    theta_gen: Element
    theta_valuation: int
    ramified_rational: int
    cm_disc: int
    base_units: UnitGroupData
    top_units: UnitGroupData

    def level_ideal(self) -> IdealLattice:
        return IdealLattice.from_integer(self.tower.top, self.level)

    def theta_ideal(self) -> IdealLattice:
        return IdealLattice.principal(self.theta_gen).pow(self.theta_valuation)

    def theta_prime(self):
        for P in factor_rational_prime(self.tower.top,
                                       self.ramified_rational):
            if P.ideal.contains(self.theta_gen):
                return P
        raise AssertionError("uniformizer escaped its rational prime")

    def cm_top(self) -> CMQuadExt:
        return CMQuadExt(self.tower.top, self.cm_disc)

    def cm_quad(self) -> FieldOrder:
        """The imaginary quadratic field K0 as an absolute degree-2 order."""
        q = field("Q")
        return CMQuadExt(q.order, self.cm_disc).absolute_order()


def field_names():
    return sorted(_data()["fields"])


def tower_names():
    return sorted(_data()["towers"])


def field(name: str) -> FieldPreset:
    if name not in _field_cache:
        try:
            spec = _data()["fields"][name]
        except KeyError:
            raise KeyError(f"unknown field preset {name!r}; "
                           f"have {field_names()}") from None
        order = FieldOrder.from_min_poly(name, spec["min_poly"])
        assert order.disc == spec["disc"], name
        units = UnitGroupData(order, tuple(order.el(u)
                                           for u in spec["units"]))
        units.validate()
        _field_cache[name] = FieldPreset(name, order, units)
    return _field_cache[name]


def tower(name: str) -> TowerPreset:
    if name not in _tower_cache:
        try:
            spec = _data()["towers"][name]
        except KeyError:
            raise KeyError(f"unknown tower preset {name!r}; "
                           f"have {tower_names()}") from None
        bot = field(spec["base"])
        top = field(spec["top"])
        if bot.order.n == 1:
            base_image = top.order.zero()  # only its 0th power is used
        else:
            base_image = top.order.el(spec["base_gen_image"])
        td = TowerData(name, bot.order, top.order, spec["p"],
                       top.order.el(spec["gamma_gen_image"]), base_image)
        theta = top.order.el(spec["theta_uniformizer"])
        _tower_cache[name] = TowerPreset(
            name, td, spec["level"], theta, spec["theta_valuation"],
            spec["ramified_rational"], spec["cm_disc"],
            bot.units, top.units)
    return _tower_cache[name]
