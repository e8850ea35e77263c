from .pulse import ApproxPulse, RrcPulse, SpectralProfile, TapConfig, TapGrid, TapProfile
from .channel import ChannelParams, CovarianceBlocks, KeyRateBreakdown, ModulationParams
from .overlap_set import OverlapSet
from .search import NbarOptimum, OptimumReport, SearchBounds, SweepConfig
