import os
import tempfile
from pathlib import Path
from typing import Union

from src.utils.logger import logger

log = logger(__name__)


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    """
    Write text to path via a temporary file in the same directory followed by
    os.replace, so readers never observe a partially written file.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)

    fd, tmp_name = tempfile.mkstemp(
        dir=target.parent, prefix=f".{target.name}.", suffix=".tmp"
    )
    try:
        # newline="" keeps csv line endings byte-identical across platforms
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp_name, target)
    except OSError as e:
        log.error(f"Failed to write {target}: {e}")
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise

    log.debug(f"Wrote {len(text)} characters to {target}")
    return target
