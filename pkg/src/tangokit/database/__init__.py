# Keep this lightweight: service.py pulls in the server stack, which in turn
# needs the client; import DatabaseServer from tangokit.database.service.
from .store import DbStore, DeviceRecord, ServerRecord, SELF_DEVICE
