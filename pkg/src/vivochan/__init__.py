"""In-vivo radio channel toolkit: tissue dielectrics, layered plane-wave
propagation, SAR, path-loss models, channel realizations and link budgets."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigurationError, DataError, DomainError, FrequencyRangeError, ParseError,
    UnknownLabelError, ValidationError, VivochanError,
)
from .dielectrics import (  # noqa: E402
    ColeColePole, DielectricSample, TissueDielectricSpec, cole_cole, evaluate_permittivity,
    get_tissue, load_default_database, load_tissue_database, propagation_constant, sweep,
    wavelength_in_tissue,
)
from .layers import (  # noqa: E402
    Layer, LayerStack, PlaneWaveSolution, absorption_loss_db, load_stack, simple_stack,
    solve_stack, standing_wave_ratio,
)
from .exposure import (  # noqa: E402
    FCC_1G, ExposureLimit, ExposureVerdict, SarQuery, check_exposure, compute_sar, sar_profile,
)
from .pathloss import (  # noqa: E402
    AntennaPort, Fspl, FsplRlAbsorption, FsplWithRl, PmbaFarField, PmbaNearField,
    StatisticalA, StatisticalB, builtin_measurements, builtin_parameters, mean_path_loss_db,
    model_from_dict, model_to_dict, path_loss_db, received_power, sample_path_loss_db,
    validate_against_measurements,
)
from .channel import (  # noqa: E402
    ChannelRealization, PdpShape, angular_summary, fit_frequency_trend, realize_channel,
)
from .regulatory import (  # noqa: E402
    BandSpec, EirpLimit, band_catalog, check_eirp, classify_frequency, get_band, link_budget,
    link_budget_from_scenario,
)
