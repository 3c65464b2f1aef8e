"""
Django settings for the median_gnn project.

Process-level knobs are read with python-decouple from the environment or a `.env` file next to
`manage.py`. Experiment-level knobs (epochs, filters, activations, ...) are not settings; they
come from the JSON experiment config validated by `experiments.forms.ExperimentConfigForm`.

For the full list of Django settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""
from pathlib import Path
from decouple import Choices, config


# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# The engine never serves sessions in production, so a development key is an acceptable default.
SECRET_KEY = config("DJANGO_SECRET_KEY", default="median-gnn-development-key")

DEBUG = config("DEBUG", default=False, cast=bool)

ALLOWED_HOSTS = config("ALLOWED_HOSTS", default="localhost,127.0.0.1").split(",")

# Application definition

INSTALLED_APPS = [
    "django.contrib.admin",
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "django.contrib.sessions",
    "django.contrib.messages",
    "django.contrib.staticfiles",
    "median_gnn",
    "graphs",
    "gnn",
    "training",
    "datagen",
    "experiments",
]

MIDDLEWARE = [
    "django.middleware.security.SecurityMiddleware",
    "django.contrib.sessions.middleware.SessionMiddleware",
    "django.middleware.common.CommonMiddleware",
    "django.middleware.csrf.CsrfViewMiddleware",
    "django.contrib.auth.middleware.AuthenticationMiddleware",
    "django.contrib.messages.middleware.MessageMiddleware",
    "django.middleware.clickjacking.XFrameOptionsMiddleware",
]

ROOT_URLCONF = "median_gnn.urls"

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "context_processors": [
                "django.template.context_processors.debug",
                "django.template.context_processors.request",
                "django.contrib.auth.context_processors.auth",
                "django.contrib.messages.context_processors.messages",
            ],
        },
    },
]

WSGI_APPLICATION = "median_gnn.wsgi.application"


# Database
# Only used to keep a history of experiments when RECORD_RUNS is enabled.

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": BASE_DIR / "db.sqlite3",
    }
}

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True

STATIC_URL = "/static/"
STATIC_ROOT = BASE_DIR / "staticfiles"


# Engine settings

# Orientation used for hop neighborhoods on directed graphs. "in" follows the direction in which
# the shift S x aggregates under the [W]_ij = w_ji convention.
NEIGHBORHOOD_DIRECTION = config(
    "NEIGHBORHOOD_DIRECTION", default="in", cast=Choices(["in", "out"])
)

# Power iteration used to normalize the adjacency matrix by its spectral radius.
SPECTRAL_TOL = config("SPECTRAL_TOL", default=1e-9, cast=float)
SPECTRAL_MAX_ITER = config("SPECTRAL_MAX_ITER", default=5000, cast=int)
SPECTRAL_SEED = config("SPECTRAL_SEED", default=0, cast=int)

# Shift matrices are dense; refuse graphs that would not fit comfortably in memory.
MAX_NODES = config("MAX_NODES", default=10_000, cast=int)

# Persist Experiment and RoundResult rows (run `manage.py migrate` first).
RECORD_RUNS = config("RECORD_RUNS", default=False, cast=bool)


# Logging
# https://docs.djangoproject.com/en/5.2/topics/logging/

LOG_LEVEL = config("LOG_LEVEL", default="INFO")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "engine": {
            "format": "{asctime} {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "engine",
        },
    },
    "loggers": {
        app: {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False}
        for app in ["median_gnn", "graphs", "gnn", "training", "datagen", "experiments"]
    },
}
