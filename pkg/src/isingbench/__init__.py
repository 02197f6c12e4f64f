"""Hardware-native Ising instances, hardness analysis and annealing benchmarks."""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    HardnessReport,
    IsingModel,
    Qubo,
    SampleRecord,
    SampleSet,
    analytic_hardness_ratio,
    hardness_ratio,
    ising_energy,
    qubo_energy,
    qubo_to_ising,
)
from .topology import (  # noqa: F401
    HardwareGraph,
    build_chimera,
    build_pegasus,
    build_zephyr,
    load_graph,
)
