import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _int_env(name, default):
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None


# Logging
LOG_LEVEL = os.environ.get('LOG_LEVEL', 'WARNING').upper()

# Verification limits
MATERIALIZE_MAX_LEVEL = _int_env('MATERIALIZE_MAX_LEVEL', 7)  # deeper chain levels use the local root check
ORDER_CHECK_MAX_LEVEL = _int_env('ORDER_CHECK_MAX_LEVEL', 6)  # s_n^(n!) = z recomputed up to here
CENTER_SEARCH_BOUND = _int_env('CENTER_SEARCH_BOUND', 64)
ORBIT_LEVELS = _int_env('ORBIT_LEVELS', 4)
PRODUCT_FORM_MAX_N = _int_env('PRODUCT_FORM_MAX_N', 5)
COMMUTE_MAX_LEVEL = _int_env('COMMUTE_MAX_LEVEL', 4)
ORBIT_MAX_POINTS = _int_env('ORBIT_MAX_POINTS', 200_000)

# Limits on words posted over HTTP
MAX_WORD_EXPONENT = _int_env('MAX_WORD_EXPONENT', 1_000_000)
MAX_WORD_TOKENS = _int_env('MAX_WORD_TOKENS', 10_000)

# Word evaluation: "default" means the word x y acts as x after y
WORD_CONVENTION = os.environ.get('WORD_CONVENTION', 'default')

# CORS Settings
FRONTEND_URL = os.environ.get('FRONTEND_URL', 'http://localhost:3000')
CORS_ORIGINS = [
    'http://localhost:3000',  # Development
    FRONTEND_URL,
]

# Clean empty strings and duplicates from CORS_ORIGINS
CORS_ORIGINS = list(dict.fromkeys(origin for origin in CORS_ORIGINS if origin))
