"""Published in-vivo channel datasets, embedded verbatim.

Values are measured/fitted at 915 MHz on a male torso model (regions, sides)
and a human cadaver (measurement set). Depths in the measurement set were
published in centimetres and are stored here in millimetres.
"""

# label -> (PL0 [dB], slope m [dB per unit d/d0], sigma [dB]); d0 = 10 mm
REGION_PARAMETERS = {
    "Above heart": (24.75, 2.30, 3.73),
    "Heart": (22.70, 1.96, 2.38),
    "Stomach–kidneys": (22.56, 2.55, 1.79),
    "Intestine": (24.23, 2.31, 3.47),
    "Overall torso area": (23.56, 2.28, 3.38),
}

SIDE_PARAMETERS = {
    "Anterior": (23.83, 2.46, 3.51),
    "Posterior": (23.76, 2.21, 1.92),
    "Left lateral": (23.34, 2.28, 3.67),
    "Right lateral": (23.22, 2.27, 3.51),
    "Overall torso area": (23.56, 2.28, 3.38),
}

REFERENCE_DEPTH_MM = 10.0

# (label, depth_mm, path loss dB)
CADAVER_MEASUREMENTS = (
    ("Above heart", 30.0, 45.32),
    ("Below heart", 80.0, 55.61),
    ("Above stomach", 50.0, 48.19),
    ("Inside stomach", 90.0, 50.80),
    ("Above intestine", 20.0, 29.95),
    ("Below intestine", 100.0, 50.47),
)

# angular path-loss statistics; in-vivo antenna 78 mm deep in the abdomen
ANGULAR_STATISTICS = {
    "frequency_ghz": (0.4, 1.4, 2.4),
    "average_db": (46.316, 76.74442, 108.8819),
    "max_difference_db": (20.3373, 33.04337, 45.38211),
    "peak_to_average_ratio": (1.197665, 1.171730, 1.208047),
}

MAX_EXCESS_DELAY_NS = 10.0
