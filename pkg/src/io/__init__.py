from .io import (
    ConfigError,
    load_config,
    save_json,
    save_csv,
    save_field,
    load_field
)
