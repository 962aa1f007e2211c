"""NMEA 0183 sentence parsing and encoding (GGA, RMC).

GGA carries position, fix quality, HDOP, and satellite count; RMC carries
position plus UTC date/time, which downstream clock sync uses as GPS-time
anchors. The checksum is the XOR of every byte strictly between '$' and
the final '*', written as two uppercase hex digits.

Stream files hold one record per line as `<t_unit> <sentence>`, where
t_unit is the logging unit's receipt timestamp in seconds.
"""

from __future__ import annotations

from datetime import datetime, timezone
from typing import Optional

from ..errors import ChecksumMismatch, MalformedField, UnsupportedSentenceType
from ..records import FixQuality, GnssFix
from .streams import format_header, parse_header

KNOTS_TO_KPH = 1.852

# RMC positioning-mode char (NMEA 2.3+) <-> fix quality
_MODE_TO_QUALITY = {
    "A": FixQuality.GPS,
    "D": FixQuality.DGPS,
    "F": FixQuality.RTK_FLOAT,
    "R": FixQuality.RTK_FIXED,
    "N": FixQuality.NO_FIX,
}
_QUALITY_TO_MODE = {q: m for m, q in _MODE_TO_QUALITY.items()}


def nmea_checksum(payload: str) -> int:
    """XOR of all payload bytes (the text between '$' and '*')."""
    c = 0
    for ch in payload:
        c ^= ord(ch)
    return c


def _split_sentence(line: str) -> tuple[str, str]:
    line = line.strip()
    if not line.startswith("$"):
        raise MalformedField("start", "sentence must begin with '$'")
    if "*" not in line:
        raise MalformedField("checksum", "no '*' delimiter")
    payload, declared = line[1:].rsplit("*", 1)
    if len(declared) != 2:
        raise MalformedField("checksum", f"expected two hex digits, got '{declared}'")
    try:
        declared_val = int(declared, 16)
    except ValueError:
        raise MalformedField("checksum", f"non-hex checksum '{declared}'") from None
    if nmea_checksum(payload) != declared_val:
        raise ChecksumMismatch(f"computed {nmea_checksum(payload):02X}, declared {declared.upper()}")
    return payload, declared


def _parse_latlon(value: str, hemi: str, field: str) -> float:
    # ddmm.mmmm for latitude, dddmm.mmmm for longitude
    try:
        raw = float(value)
    except ValueError:
        raise MalformedField(field, f"'{value}'") from None
    if raw < 0:
        raise MalformedField(field, "negative ddmm value")
    degrees = int(raw // 100)
    minutes = raw - degrees * 100
    if minutes >= 60.0:
        raise MalformedField(field, f"minutes {minutes} >= 60")
    deg = degrees + minutes / 60.0
    if hemi in ("S", "W"):
        deg = -deg
    elif hemi not in ("N", "E"):
        raise MalformedField(field + "_hemisphere", f"'{hemi}'")
    limit = 90.0 if field == "lat" else 180.0
    if not -limit <= deg <= limit:
        raise MalformedField(field, f"{deg} out of bounds")
    return deg


def _parse_hhmmss(value: str) -> float:
    if len(value) < 6:
        raise MalformedField("time", f"'{value}'")
    try:
        h, m = int(value[0:2]), int(value[2:4])
        s = float(value[4:])
    except ValueError:
        raise MalformedField("time", f"'{value}'") from None
    if h > 23 or m > 59 or s >= 61.0:
        raise MalformedField("time", f"'{value}'")
    return h * 3600.0 + m * 60.0 + s


def _parse_float(value: str, field: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise MalformedField(field, f"'{value}'") from None


def _parse_gga(fields: list[str], t_unit: Optional[float]) -> GnssFix:
    if len(fields) < 10:
        raise MalformedField("field_count", f"GGA needs >= 10 fields, got {len(fields)}")
    tod = _parse_hhmmss(fields[1]) if fields[1] else None
    try:
        quality = FixQuality(int(fields[6]))
    except ValueError:
        raise MalformedField("quality", f"'{fields[6]}'") from None
    t = t_unit if t_unit is not None else (tod if tod is not None else 0.0)
    if quality == FixQuality.NO_FIX:
        return GnssFix(t=t, fix_quality=FixQuality.NO_FIX)
    lat = _parse_latlon(fields[2], fields[3], "lat")
    lon = _parse_latlon(fields[4], fields[5], "lon")
    n_sats = int(_parse_float(fields[7], "n_sats")) if fields[7] else None
    if n_sats is not None and n_sats < 0:
        raise MalformedField("n_sats", "negative")
    hdop = _parse_float(fields[8], "hdop") if fields[8] else None
    if hdop is not None and hdop < 0:
        raise MalformedField("hdop", "negative")
    alt = _parse_float(fields[9], "alt") if fields[9] else None
    return GnssFix(t=t, lat=lat, lon=lon, alt_m=alt, fix_quality=quality, hdop=hdop, n_sats=n_sats)


def _parse_rmc(fields: list[str], t_unit: Optional[float]) -> GnssFix:
    if len(fields) < 10:
        raise MalformedField("field_count", f"RMC needs >= 10 fields, got {len(fields)}")
    tod = _parse_hhmmss(fields[1]) if fields[1] else None
    status = fields[2]
    utc_s = None
    if fields[9] and tod is not None:
        d = fields[9]
        if len(d) != 6 or not d.isdigit():
            raise MalformedField("date", f"'{d}'")
        day, month, year = int(d[0:2]), int(d[2:4]), 2000 + int(d[4:6])
        try:
            midnight = datetime(year, month, day, tzinfo=timezone.utc)
        except ValueError:
            raise MalformedField("date", f"'{d}'") from None
        utc_s = midnight.timestamp() + tod
    t = t_unit if t_unit is not None else (utc_s if utc_s is not None else (tod or 0.0))
    if status == "V":
        return GnssFix(t=t, fix_quality=FixQuality.NO_FIX, utc_s=utc_s)
    if status != "A":
        raise MalformedField("status", f"'{status}'")
    lat = _parse_latlon(fields[3], fields[4], "lat")
    lon = _parse_latlon(fields[5], fields[6], "lon")
    speed = _parse_float(fields[7], "sog") * KNOTS_TO_KPH if fields[7] else None
    course = _parse_float(fields[8], "course") if fields[8] else None
    quality = FixQuality.GPS
    if len(fields) >= 13 and fields[12]:
        mode = fields[12]
        if mode not in _MODE_TO_QUALITY:
            raise MalformedField("mode", f"'{mode}'")
        quality = _MODE_TO_QUALITY[mode]
    return GnssFix(
        t=t, lat=lat, lon=lon, fix_quality=quality, utc_s=utc_s, speed_kph=speed, course_deg=course
    )


def parse_nmea_sentence(line: str, t_unit: Optional[float] = None) -> GnssFix:
    """Parse one GGA or RMC sentence into a GnssFix.

    t_unit is the receipt timestamp on the logging unit's clock; when
    omitted, the sentence's own UTC time stands in.
    """
    payload, _ = _split_sentence(line)
    fields = payload.split(",")
    stype = fields[0][-3:] if len(fields[0]) >= 3 else fields[0]
    if stype == "GGA":
        return _parse_gga(fields, t_unit)
    if stype == "RMC":
        return _parse_rmc(fields, t_unit)
    raise UnsupportedSentenceType(f"'{fields[0]}'")


def _fmt_latlon(deg: float, is_lat: bool) -> tuple[str, str]:
    hemi = ("N" if deg >= 0 else "S") if is_lat else ("E" if deg >= 0 else "W")
    mag = abs(deg)
    d = int(mag)
    minutes = (mag - d) * 60.0
    # guard against 59.999995 rounding up to 60
    if round(minutes, 5) >= 60.0:
        d += 1
        minutes = 0.0
    width = 2 if is_lat else 3
    return f"{d:0{width}d}{minutes:08.5f}", hemi


def _fmt_hhmmss(tod: float) -> str:
    tod = tod % 86400.0
    h = int(tod // 3600)
    m = int((tod - h * 3600) // 60)
    s = tod - h * 3600 - m * 60
    if round(s, 3) >= 60.0:  # rounding spill
        s = 0.0
        m += 1
        if m == 60:
            m = 0
            h = (h + 1) % 24
    return f"{h:02d}{m:02d}{s:06.3f}"


def _finish(payload: str) -> str:
    return f"${payload}*{nmea_checksum(payload):02X}"


def encode_gga(fix: GnssFix, utc_tod_s: Optional[float] = None) -> str:
    """Render a GGA sentence. Time of day falls back to fix.utc_s, then fix.t."""
    if utc_tod_s is None:
        utc_tod_s = fix.utc_s if fix.utc_s is not None else fix.t
    tstr = _fmt_hhmmss(utc_tod_s)
    if fix.fix_quality == FixQuality.NO_FIX or not fix.has_position:
        payload = f"GPGGA,{tstr},,,,,0,,,,M,,M,,"
        return _finish(payload)
    lat_s, lat_h = _fmt_latlon(fix.lat, True)
    lon_s, lon_h = _fmt_latlon(fix.lon, False)
    nsat = f"{fix.n_sats:02d}" if fix.n_sats is not None else ""
    hdop = f"{fix.hdop:.2f}" if fix.hdop is not None else ""
    alt = f"{fix.alt_m:.1f}" if fix.alt_m is not None else ""
    payload = (
        f"GPGGA,{tstr},{lat_s},{lat_h},{lon_s},{lon_h},{int(fix.fix_quality)},{nsat},{hdop},{alt},M,,M,,"
    )
    return _finish(payload)


def encode_rmc(fix: GnssFix) -> str:
    """Render an RMC sentence; requires fix.utc_s for the date/time fields."""
    if fix.utc_s is None:
        raise ValueError("RMC encoding needs utc_s")
    dt = datetime.fromtimestamp(fix.utc_s, tz=timezone.utc)
    tod = dt.hour * 3600 + dt.minute * 60 + dt.second + dt.microsecond / 1e6
    tstr = _fmt_hhmmss(tod)
    dstr = dt.strftime("%d%m%y")
    if fix.fix_quality == FixQuality.NO_FIX or not fix.has_position:
        payload = f"GPRMC,{tstr},V,,,,,,,{dstr},,,N"
        return _finish(payload)
    lat_s, lat_h = _fmt_latlon(fix.lat, True)
    lon_s, lon_h = _fmt_latlon(fix.lon, False)
    sog = f"{fix.speed_kph / KNOTS_TO_KPH:06.2f}" if fix.speed_kph is not None else ""
    cog = f"{fix.course_deg:05.1f}" if fix.course_deg is not None else ""
    mode = _QUALITY_TO_MODE[fix.fix_quality]
    payload = f"GPRMC,{tstr},A,{lat_s},{lat_h},{lon_s},{lon_h},{sog},{cog},{dstr},,,{mode}"
    return _finish(payload)


def read_gnss_file(path) -> tuple[list[GnssFix], dict]:
    """Read a gnss.nmea stream file: '# key=value ...' header, then
    '<t_unit> <sentence>' lines."""
    fixes = []
    header = {}
    with open(path) as f:
        for raw in f:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                header.update(parse_header(line))
                continue
            tpart, _, sentence = line.partition(" ")
            fixes.append(parse_nmea_sentence(sentence, t_unit=float(tpart)))
    return fixes, header


def write_gnss_file(path, entries, header: Optional[dict] = None):
    """entries: iterable of (t_unit, sentence) pairs."""
    with open(path, "w") as f:
        f.write(format_header("gnss", header))
        for t_unit, sentence in entries:
            f.write(f"{t_unit:.6f} {sentence}\n")
