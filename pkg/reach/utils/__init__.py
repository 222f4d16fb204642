from .blockstore import *
from .formatting import *
from .model import *
