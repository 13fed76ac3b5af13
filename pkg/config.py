import os
from dotenv import load_dotenv
load_dotenv()

# Derivability depth used when no --depth flag is given; RunConfig validates it
DEFAULT_DEPTH = os.getenv("REDUCTIO_DEPTH", "3")

LOG_LEVEL = os.getenv("REDUCTIO_LOG_LEVEL", "WARNING").upper()

DEFAULT_EMIT = os.getenv("REDUCTIO_EMIT", "text")

EMIT_FORMATS = ("text", "json", "dot")
REWRITE_MODES = ("dpo", "sqpo")
DEDUCTION_MODES = ("classic", "pleo", "pleo-minimal")
