"""Defaults shared by every engine."""

# Upper bound on injective groundings enumerated for one example
GROUNDING_CAP = 10**6

# Collage rasterization
RASTER_RESOLUTION = 128
LOSS_TOLERANCE = 1e-3
FD_EPSILON = 1e-3
MAX_HALVINGS = 20

# Scenes
SCENE_DIMENSION = 16
ACCEPT_THRESHOLD = 0.9
PREDICATE_THRESHOLD = 0.5

# Toggled off by the test-suite
PROGRESS = True
