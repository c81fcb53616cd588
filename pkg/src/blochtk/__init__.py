"""blochtk: generate, solve, and export optical Bloch equations.

Builds the rotating-frame equations of motion for N-level systems (2 to
30 levels) driven by multiple coherent field modes, integrates them with
fixed-step RK4 in time and detuning domains, extracts spectral
observables, and emits standalone C solvers.
"""
from .analysis import (Curve, LorentzianFit, cpt_coherence, fwhm_interpolated,
                       lorentzian_fit, peak_find, power_broadened_fwhm,
                       two_level_steady_state)
from .codegen import CodegenRequest, EmittedSource, emit, equivalence_check
from .config import ConfigDocument, ConfigError, dump_config, load_config
from .dynamics import (NumericGenerator, SolverConfig, Spectrum, SweepConfig,
                       Trajectory, compile, evolve, sweep, trace_error)
from .generator import (BlochSystem, Element, LoopInconsistency, ParameterSet,
                        Term, TermKind, detuning_map, equation_count, generate,
                        render)
from .levels import (Coupling, DecayChannel, FieldMode, Level, LevelDiagram,
                     ValidationReport, default_branching, default_initial_state,
                     derived_gammas, validate)
from .presets import PRESET_NAMES, Preset, preset

__version__ = "0.1.0"

__all__ = [
    "BlochSystem", "CodegenRequest", "ConfigDocument", "ConfigError",
    "Coupling", "Curve", "DecayChannel", "Element", "EmittedSource",
    "FieldMode", "Level", "LevelDiagram", "LoopInconsistency",
    "LorentzianFit", "NumericGenerator", "ParameterSet", "Preset",
    "PRESET_NAMES", "SolverConfig", "Spectrum", "SweepConfig", "Term",
    "TermKind", "Trajectory", "ValidationReport", "compile",
    "cpt_coherence", "default_branching", "default_initial_state",
    "derived_gammas", "detuning_map", "dump_config", "emit",
    "equation_count", "equivalence_check", "evolve", "fwhm_interpolated",
    "generate", "load_config", "lorentzian_fit", "peak_find",
    "power_broadened_fwhm", "preset", "render", "sweep", "trace_error",
    "two_level_steady_state", "validate",
]
