from ._textvqa_synth import *  # noqa: F401,F403
from ._textvqa_synth import __version__  # noqa: F401
