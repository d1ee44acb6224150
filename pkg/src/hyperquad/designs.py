"""Download-and-cache helper for published spherical design point sets.

The base URL comes from HYPERQUAD_DESIGN_URL (or an explicit argument);
files are cached verbatim under a cache directory.  Nothing in the math
paths depends on this module: every loader also accepts local files.
"""

from __future__ import annotations

import logging
import os
import shutil
import urllib.parse
import urllib.request

ENV_URL = "HYPERQUAD_DESIGN_URL"
ENV_CACHE = "HYPERQUAD_CACHE_DIR"

log = logging.getLogger(__name__)


def default_cache_dir() -> str:
    return os.environ.get(ENV_CACHE) or os.path.join(
        os.path.expanduser("~"), ".cache", "hyperquad", "designs"
    )


def fetch_design(name: str, base_url: str | None = None, cache_dir: str | None = None,
                 refresh: bool = False, timeout: float = 30.0) -> str:
    """Return a local path to design file `name`, downloading it if not cached."""
    if not name or "/" in name or name in (".", ".."):
        raise ValueError(f"invalid design file name {name!r}")
    cache_dir = cache_dir or default_cache_dir()
    path = os.path.join(cache_dir, name)
    if os.path.exists(path) and not refresh:
        return path
    base_url = base_url or os.environ.get(ENV_URL)
    if not base_url:
        raise RuntimeError(f"no base URL: set {ENV_URL} or pass base_url")
    url = urllib.parse.urljoin(base_url.rstrip("/") + "/", urllib.parse.quote(name))
    os.makedirs(cache_dir, exist_ok=True)
    tmp = path + ".part"
    log.info("fetching %s", url)
    with urllib.request.urlopen(url, timeout=timeout) as resp, open(tmp, "wb") as fh:
        shutil.copyfileobj(resp, fh)
    os.replace(tmp, path)
    return path
