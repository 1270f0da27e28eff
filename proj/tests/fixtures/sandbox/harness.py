"""Minimal stand-in for the operator harness, used by the host-side tests."""
import importlib.util
import json
import sys
import traceback


def emit(obj):
    sys.stdout.write(json.dumps(obj) + "\n")
    sys.stdout.flush()


def main():
    path = sys.argv[1]
    try:
        spec = importlib.util.spec_from_file_location("candidate", path)
        mod = importlib.util.module_from_spec(spec)
        spec.loader.exec_module(mod)
        fn = getattr(mod, "variation")
    except Exception as exc:
        emit({"v": 1, "event": "startup-error", "message": repr(exc)})
        return
    emit({"v": 1, "event": "ready"})
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            req = json.loads(line)
            rid = req["id"]
        except Exception:
            emit({"v": 1, "id": 0, "status": "error",
                  "error": {"kind": "protocol", "message": "malformed line: " + line[:200]}})
            continue
        try:
            children = fn(req["role"], req["instance"], req["parents"], req["seed"], req["params"])
            emit({"v": 1, "id": rid, "status": "ok", "children": children})
        except Exception:
            emit({"v": 1, "id": rid, "status": "error",
                  "error": {"kind": "exception", "message": traceback.format_exc()[-500:]}})


if __name__ == "__main__":
    main()
