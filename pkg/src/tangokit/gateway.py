"""HTTP/JSON bridge: REST routes over the device wire protocol and database,
serving the web console's API (and any other HTTP client).

The gateway holds no authoritative state — only a pool of device proxies with
idle eviction — so it can be restarted at any time.  Command/attribute values
cross the boundary in the canonical JSON mapping; device errors come back as
an error array with their reason codes, mapped onto HTTP status codes.
"""
from __future__ import annotations

import argparse
import json
import sys
import threading
import time

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .astor import Fleet, view_to_json
from .client import DatabaseClient, DeviceProxy
from .jsonmap import json_to_value, value_to_json
from .model import DevFailed, VOID, fail

IDLE_EVICT_S = 300.0

_NOT_FOUND = {
    "API_DeviceNotFound", "DEVICE_NOT_DEFINED", "SERVER_NOT_DEFINED",
    "API_CommandNotFound", "API_AttrNotFound", "API_PollObjNotFound",
    "STARTER_UnknownServer",
}
_UNREACHABLE = {"API_DeviceUnreachable", "API_DeviceTimedOut"}


def status_for(exc: DevFailed) -> int:
    reason = exc.reason
    if reason in _NOT_FOUND:
        return 404
    if reason in _UNREACHABLE:
        return 504
    if reason == "API_AttrNotWritable":
        return 403
    if reason in ("BAD_JSON", "MALFORMED_NAME", "MALFORMED_PATTERN", "MALFORMED_ARGS"):
        return 400
    if reason == "STARTER_UNREACHABLE":
        return 502
    return 502


def error_body(exc: DevFailed) -> dict:
    return {"errors": [
        {"reason": e.reason, "description": e.description,
         "origin": e.origin, "severity": e.severity}
        for e in exc.errors
    ]}


class ProxyPool:
    """Device proxies keyed by name, evicted after five idle minutes."""

    def __init__(self, db_endpoint: str):
        self.db_endpoint = db_endpoint
        self._lock = threading.Lock()
        self._pool: dict[str, tuple[DeviceProxy, float]] = {}

    def get(self, name: str) -> DeviceProxy:
        now = time.monotonic()
        with self._lock:
            for key, (proxy, used) in list(self._pool.items()):
                if now - used > IDLE_EVICT_S and key != name:
                    proxy.close()
                    del self._pool[key]
            entry = self._pool.get(name)
            if entry is None:
                proxy = DeviceProxy(name, db=self.db_endpoint)
                self._pool[name] = (proxy, now)
                return proxy
            proxy, _ = entry
            self._pool[name] = (proxy, now)
            return proxy

    def close(self) -> None:
        with self._lock:
            for proxy, _ in self._pool.values():
                proxy.close()
            self._pool.clear()


def attribute_value_json(av) -> dict:
    flat = list(av.data)
    if av.dim_y > 0:
        value = [flat[r * av.dim_x:(r + 1) * av.dim_x] for r in range(av.dim_y)]
    elif av.dim_x == 1 and len(flat) == 1:
        value = flat[0]
    else:
        value = flat
    return {"name": av.name, "element_type": av.element_type.name, "value": value,
            "dim_x": av.dim_x, "dim_y": av.dim_y, "timestamp": av.timestamp,
            "source": av.source.name}


def attribute_config_json(cfg) -> dict:
    return {"name": cfg.name, "writable": cfg.writable.name,
            "element_type": cfg.element_type.name, "format": cfg.format.name,
            "max_dim_x": cfg.max_dim_x, "max_dim_y": cfg.max_dim_y,
            "description": cfg.description, "unit": cfg.unit}


def command_info_json(info) -> dict:
    return {"name": info.name, "in_type": info.in_type.name, "out_type": info.out_type.name,
            "description": info.description,
            "allowed_states": sorted(s.name for s in info.allowed_states)}


def create_app(db_endpoint: str, static_dir: str | None = None) -> FastAPI:
    from contextlib import asynccontextmanager

    @asynccontextmanager
    async def lifespan(_app):
        yield
        pool.close()
        with fleet_lock:
            fleet.close()
        db.close()

    app = FastAPI(title="device-control gateway", version="1.0",
                  openapi_url="/api/v1/spec", lifespan=lifespan)
    pool = ProxyPool(db_endpoint)
    db = DatabaseClient(db_endpoint)
    fleet = Fleet(db_endpoint, timeout_s=30.0)
    fleet_lock = threading.Lock()

    @app.exception_handler(DevFailed)
    async def devfailed_handler(request: Request, exc: DevFailed):
        return JSONResponse(status_code=status_for(exc), content=error_body(exc))

    def dev(domain: str, family: str, member: str) -> str:
        return f"{domain}/{family}/{member}"

    # -- device routes ----------------------------------------------------

    @app.get("/api/v1/devices/{domain}/{family}/{member}/commands")
    def list_commands(domain: str, family: str, member: str):
        proxy = pool.get(dev(domain, family, member))
        return [command_info_json(i) for i in proxy.command_list_query()]

    @app.post("/api/v1/devices/{domain}/{family}/{member}/commands/{cmd}")
    async def run_command(domain: str, family: str, member: str, cmd: str, request: Request):
        body = await request.body()
        if body.strip() in (b"", b"null"):
            argin = VOID
        else:
            try:
                doc = json.loads(body)
            except ValueError as exc:
                raise fail("BAD_JSON", f"request body is not JSON: {exc}", "gateway")
            argin = json_to_value(doc)
        proxy = pool.get(dev(domain, family, member))
        return value_to_json(proxy.command_inout(cmd, argin))

    @app.get("/api/v1/devices/{domain}/{family}/{member}/attributes")
    def list_attributes(domain: str, family: str, member: str):
        proxy = pool.get(dev(domain, family, member))
        return [attribute_config_json(c) for c in proxy.get_attribute_config()]

    @app.get("/api/v1/devices/{domain}/{family}/{member}/attributes/{name}")
    def read_attribute(domain: str, family: str, member: str, name: str):
        proxy = pool.get(dev(domain, family, member))
        return attribute_value_json(proxy.read_attribute(name))

    @app.put("/api/v1/devices/{domain}/{family}/{member}/attributes/{name}")
    async def write_attribute(domain: str, family: str, member: str, name: str,
                              request: Request):
        try:
            doc = json.loads(await request.body())
        except ValueError as exc:
            raise fail("BAD_JSON", f"request body is not JSON: {exc}", "gateway")
        if not isinstance(doc, dict) or "value" not in doc:
            raise fail("BAD_JSON", 'attribute write body must be {"value": ...}', "gateway")
        proxy = pool.get(dev(domain, family, member))
        proxy.write_attribute(name, doc["value"])
        return Response(status_code=204)

    @app.get("/api/v1/devices/{domain}/{family}/{member}/state")
    def device_state(domain: str, family: str, member: str):
        proxy = pool.get(dev(domain, family, member))
        return {"state": proxy.state().name, "status": proxy.status()}

    # -- database routes --------------------------------------------------

    @app.get("/api/v1/db/browse")
    def db_browse(pattern: str = "*/*/*"):
        return db.browse(pattern)

    @app.get("/api/v1/db/devices")
    def db_devices():
        return [db.import_device(n) for n in db.browse("*/*/*")]

    @app.get("/api/v1/db/devices/{domain}/{family}/{member}")
    def db_device(domain: str, family: str, member: str):
        return db.import_device(dev(domain, family, member))

    @app.get("/api/v1/db/devices/{domain}/{family}/{member}/properties")
    def db_properties(domain: str, family: str, member: str):
        return db.get_device_property(dev(domain, family, member))

    @app.get("/api/v1/db/devices/{domain}/{family}/{member}/properties/{prop}")
    def db_property(domain: str, family: str, member: str, prop: str):
        values = db.get_device_property(dev(domain, family, member), [prop])
        return {"values": values.get(prop.lower(), [])}

    @app.put("/api/v1/db/devices/{domain}/{family}/{member}/properties/{prop}")
    async def db_put_property(domain: str, family: str, member: str, prop: str,
                              request: Request):
        try:
            doc = json.loads(await request.body())
        except ValueError as exc:
            raise fail("BAD_JSON", f"request body is not JSON: {exc}", "gateway")
        if not isinstance(doc, dict) or not isinstance(doc.get("values"), list):
            raise fail("BAD_JSON", 'property write body must be {"values": [strings]}',
                       "gateway")
        db.put_device_property(dev(domain, family, member),
                               {prop: [str(v) for v in doc["values"]]})
        return Response(status_code=204)

    @app.delete("/api/v1/db/devices/{domain}/{family}/{member}/properties/{prop}")
    def db_delete_property(domain: str, family: str, member: str, prop: str):
        db.delete_device_property(dev(domain, family, member), [prop])
        return Response(status_code=204)

    @app.get("/api/v1/db/servers")
    def db_servers():
        out = []
        for sid in db.get_server_list("*"):
            info = db.get_server_info(sid)
            info["devices"] = [str(d) for c in info["classes"]
                               for d in db.get_device_list(sid, c)]
            out.append(info)
        return out

    # -- fleet routes -----------------------------------------------------

    @app.get("/api/v1/servers")
    def fleet_status():
        with fleet_lock:
            return view_to_json(fleet.view())

    @app.post("/api/v1/servers/{exec_name}/{instance}/{action}")
    def fleet_action(exec_name: str, instance: str, action: str):
        if action not in ("start", "stop"):
            raise fail("BAD_JSON", f"unknown action {action!r}", "gateway")
        sid = f"{exec_name}/{instance}"
        info = db.get_server_info(sid)  # 404 when unknown
        with fleet_lock:
            fleet._issue(info["host"], "DevStart" if action == "start" else "DevStop",
                         info["server_id"])
        return JSONResponse(status_code=202, content={"poll": "/api/v1/servers"})

    if static_dir:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="console")
    return app


def main(argv=None) -> int:
    import uvicorn

    parser = argparse.ArgumentParser(prog="gateway", description="HTTP/JSON bridge")
    parser.add_argument("--listen", default="127.0.0.1:8080", help="host:port to bind")
    parser.add_argument("--db", default=None, help="database endpoint host:port")
    parser.add_argument("--static", default=None, help="directory with the built console")
    args = parser.parse_args(argv)

    from .client import db_endpoint_from_env
    db_endpoint = args.db or db_endpoint_from_env()
    host, _, port = args.listen.rpartition(":")
    app = create_app(db_endpoint, static_dir=args.static)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
    return 0


if __name__ == "__main__":
    sys.exit(main())
