"""Observable algebras of Abelian gauge theories on finite cohomological models."""
from .fgab import CircleValue, FgAbGroup, GroupElement, GroupHom, smith_normal_form, pontryagin_pair
from .surface import SpacetimeModel, SurfaceModel, builtin_surface, catalog_names, evaluate_top, load_surface
from .sectors import (LiftModel, LiftPairingData, ObservableGroup, TopFreeGroup, TopTorGroup, assemble_observables,
                      build_splitting, duality_free, duality_full, duality_tor, sigma_free, sigma_tor,
                      solve_chi_splitting, solve_delta_corrections, solve_selfdual_chi)
from .weyl import WeylElement, gram_positivity, norm1, omega_free, omega_tor, omega_total, weyl_mul, weyl_star

__all__ = [
    "CircleValue", "FgAbGroup", "GroupElement", "GroupHom", "smith_normal_form", "pontryagin_pair",
    "SpacetimeModel", "SurfaceModel", "builtin_surface", "catalog_names", "evaluate_top", "load_surface",
    "LiftModel", "LiftPairingData", "ObservableGroup", "TopFreeGroup", "TopTorGroup", "assemble_observables",
    "build_splitting", "duality_free", "duality_full", "duality_tor", "sigma_free", "sigma_tor",
    "solve_chi_splitting", "solve_delta_corrections", "solve_selfdual_chi",
    "WeylElement", "gram_positivity", "norm1", "omega_free", "omega_tor", "omega_total", "weyl_mul", "weyl_star",
]
