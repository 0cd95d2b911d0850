from .proxy import DeviceProxy, connect, db_endpoint_from_env, ENV_DB
from .db import DatabaseClient
