from .utils import get_data_filename, setup_timestamp_logging
