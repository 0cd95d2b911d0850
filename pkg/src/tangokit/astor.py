"""Fleet orchestration CLI: status plus level-ordered start/stop of every
registered device server, routed through each host's supervisor device.

Talks only to the database and to supervisor ("tango/admin/<host>") devices —
never to the managed servers themselves.  start-all walks levels ascending and
holds a barrier per level: the next level begins only once every server of the
current level is observed Running or its timeout expired; stop-all mirrors
this descending.  Partial failures are collected and reported at the end with
a nonzero exit code.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from .client import DatabaseClient, DeviceProxy, db_endpoint_from_env
from .model import DevFailed, TangoTypeTag, fail, make_value
from .starter import starter_device_name

UNKNOWN = "Unknown"
EXEMPT = "Exempt"  # level 0: never touched by a supervisor
WORKER_LIMIT = 8


@dataclass
class ServerRow:
    server_id: str
    level: int
    observed: str
    device_count: int


@dataclass
class HostView:
    hostname: str
    starter_state: str
    servers: list = field(default_factory=list)


@dataclass
class ActionResult:
    server_id: str
    level: int
    ok: bool
    issued_at: float | None = None
    observed_at: float | None = None
    error: str = ""


def _is_starter(server_id: str) -> bool:
    return server_id.lower().startswith("starter/")


class Fleet:
    """One CLI invocation's view of the control system."""

    def __init__(self, db_endpoint: str | None = None, timeout_s: float = 30.0):
        self.db = DatabaseClient(db_endpoint or db_endpoint_from_env())
        self.timeout_s = timeout_s
        self._starters: dict[str, DeviceProxy] = {}

    def close(self) -> None:
        for proxy in self._starters.values():
            proxy.close()
        self.db.close()

    # -- inventory ---------------------------------------------------------

    def servers(self) -> list[dict]:
        out = []
        for sid in self.db.get_server_list("*"):
            if _is_starter(sid) or sid.lower() == "databaseds/2":
                continue
            info = self.db.get_server_info(sid)
            count = sum(len(self.db.get_device_list(sid, c)) for c in info["classes"])
            info["device_count"] = count
            out.append(info)
        return out

    def _starter(self, host: str) -> DeviceProxy:
        proxy = self._starters.get(host.lower())
        if proxy is None:
            rec = self.db.import_device(starter_device_name(host))
            if not rec["exported"]:
                raise fail("STARTER_UNREACHABLE",
                           f"no supervisor exported for host {host}", "astor")
            proxy = DeviceProxy(f"{rec['endpoint']}/{starter_device_name(host)}", timeout=5.0)
            self._starters[host.lower()] = proxy
        return proxy

    def _starter_lists(self, host: str) -> tuple[set, set] | None:
        try:
            proxy = self._starter(host)
            running = set(proxy.command_inout("DevGetRunningServers").value)
            stopped = set(proxy.command_inout("DevGetStopServers").value)
            return running, stopped
        except DevFailed:
            return None

    # -- status ------------------------------------------------------------

    def view(self) -> list[HostView]:
        by_host: dict[str, list[dict]] = {}
        for info in self.servers():
            by_host.setdefault(info["host"], []).append(info)
        hosts = []
        for host in sorted(by_host):
            lists = self._starter_lists(host)
            if lists is None:
                state = "UNKNOWN"
            else:
                try:
                    state = self._starter(host).state().name
                except DevFailed:
                    state, lists = "UNKNOWN", None
            view = HostView(host, state)
            for info in sorted(by_host[host], key=lambda i: (i["level"], i["server_id"])):
                if info["level"] < 1:
                    observed = EXEMPT
                elif lists is None:
                    observed = UNKNOWN
                else:
                    running, _ = lists
                    observed = "Running" if info["server_id"] in running else "Stopped"
                view.servers.append(ServerRow(info["server_id"], info["level"], observed,
                                              info["device_count"]))
            hosts.append(view)
        return hosts

    # -- actions -----------------------------------------------------------

    def _issue(self, host: str, command: str, server_id: str) -> None:
        self._starter(host).command_inout(
            command, make_value(TangoTypeTag.DevString, server_id))

    def _await_observed(self, host: str, server_id: str, want_running: bool,
                        deadline: float) -> float:
        while time.monotonic() < deadline:
            lists = self._starter_lists(host)
            if lists is not None:
                running, stopped = lists
                if want_running and server_id in running:
                    return time.monotonic()
                if not want_running and server_id in stopped:
                    return time.monotonic()
            time.sleep(0.2)
        raise TimeoutError(f"{server_id} not observed "
                           f"{'Running' if want_running else 'Stopped'} "
                           f"within {self.timeout_s:.0f} s")

    def _act_one(self, info: dict, start: bool) -> ActionResult:
        sid, host, level = info["server_id"], info["host"], info["level"]
        result = ActionResult(sid, level, ok=False)
        try:
            result.issued_at = time.monotonic()
            self._issue(host, "DevStart" if start else "DevStop", sid)
            result.observed_at = self._await_observed(
                host, sid, want_running=start,
                deadline=result.issued_at + self.timeout_s)
            result.ok = True
        except (DevFailed, TimeoutError, OSError) as exc:
            result.error = str(exc)
        return result

    def _act_all(self, start: bool) -> list[ActionResult]:
        managed = [i for i in self.servers() if i["level"] >= 1]
        levels = sorted({i["level"] for i in managed}, reverse=not start)
        results = []
        with ThreadPoolExecutor(max_workers=WORKER_LIMIT) as pool:
            for level in levels:
                batch = [i for i in managed if i["level"] == level]
                results += list(pool.map(lambda i: self._act_one(i, start), batch))
        return results

    def start_all(self) -> list[ActionResult]:
        return self._act_all(start=True)

    def stop_all(self) -> list[ActionResult]:
        return self._act_all(start=False)

    def act_single(self, server_id: str, start: bool) -> ActionResult:
        try:
            info = self.db.get_server_info(server_id)
        except DevFailed:
            result = ActionResult(server_id, -1, ok=False)
            result.error = f"UNKNOWN_SERVER: {server_id} is not registered"
            return result
        info["device_count"] = 0
        return self._act_one(info, start)


# ---------------------------------------------------------------------------
# rendering

def view_to_json(hosts: list[HostView]) -> dict:
    return {"hosts": [asdict(h) for h in hosts]}


def render_status(hosts: list[HostView], out) -> None:
    if not hosts:
        print("no servers registered", file=out)
        return
    for host in hosts:
        print(f"{host.hostname}  [starter: {host.starter_state}]", file=out)
        for row in host.servers:
            print(f"  {row.server_id:<30} level {row.level:<3} {row.observed:<8} "
                  f"{row.device_count} device(s)", file=out)


def render_actions(results: list[ActionResult], out) -> int:
    failed = [r for r in results if not r.ok]
    for r in results:
        mark = "ok" if r.ok else f"FAILED ({r.error})"
        print(f"  {r.server_id:<30} level {r.level:<3} {mark}", file=out)
    if failed:
        print(f"{len(failed)} of {len(results)} action(s) failed", file=out)
        return 1
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="astor", description=__doc__.splitlines()[0])
    parser.add_argument("--db", default=None, help="database endpoint host:port")
    parser.add_argument("--timeout-s", type=float, default=30.0,
                        help="per-server observation timeout")
    parser.add_argument("--json", action="store_true", dest="as_json")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("status")
    sub.add_parser("start-all")
    sub.add_parser("stop-all")
    for name in ("start", "stop"):
        p = sub.add_parser(name)
        p.add_argument("server_id")
    args = parser.parse_args(argv)

    try:
        fleet = Fleet(args.db, timeout_s=args.timeout_s)
    except DevFailed as exc:
        print(f"astor: DB_UNREACHABLE: {exc}", file=sys.stderr)
        return 1
    try:
        if args.command == "status":
            try:
                hosts = fleet.view()
            except DevFailed as exc:
                print(f"astor: DB_UNREACHABLE: {exc}", file=sys.stderr)
                return 1
            if args.as_json:
                json.dump(view_to_json(hosts), sys.stdout, indent=2)
                print()
            else:
                render_status(hosts, sys.stdout)
            return 0

        if args.command in ("start-all", "stop-all"):
            results = fleet.start_all() if args.command == "start-all" else fleet.stop_all()
        else:
            results = [fleet.act_single(args.server_id, start=args.command == "start")]
        if args.as_json:
            json.dump({"actions": [asdict(r) for r in results]}, sys.stdout, indent=2)
            print()
            return 0 if all(r.ok for r in results) else 1
        return render_actions(results, sys.stdout)
    finally:
        fleet.close()


if __name__ == "__main__":
    sys.exit(main())
