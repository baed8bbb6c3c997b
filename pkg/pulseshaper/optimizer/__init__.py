from .simplex import SimplexConfig, SimplexTrace, StopReason, nelder_mead
from .runs import (AnnealSchedule, OptimizationRun, OptimizationSettings, StageResult, optimize_pulse, random_init,
                   target_reached)
