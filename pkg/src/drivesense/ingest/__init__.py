"""Raw sensor stream parsing, validation, and adaptive downsampling."""

from .downsample import adaptive_downsample
from .imucsv import encode_imu_record, parse_imu_record, read_imu_csv, write_imu_csv
from .nmea import (
    encode_gga,
    encode_rmc,
    nmea_checksum,
    parse_nmea_sentence,
    read_gnss_file,
    write_gnss_file,
)
from .obd import (
    PID_TABLE,
    decode_obd_frame,
    encode_obd_reading,
    encode_obd_line,
    parse_obd_line,
    read_obd_csv,
    write_obd_csv,
)
from .validate import Finding, ValidationReport, validate_stream
from .vision import encode_vision_event, parse_vision_event, read_vision_jsonl, write_vision_jsonl

__all__ = [
    "adaptive_downsample",
    "parse_imu_record",
    "encode_imu_record",
    "read_imu_csv",
    "write_imu_csv",
    "nmea_checksum",
    "parse_nmea_sentence",
    "encode_gga",
    "encode_rmc",
    "read_gnss_file",
    "write_gnss_file",
    "PID_TABLE",
    "decode_obd_frame",
    "encode_obd_reading",
    "parse_obd_line",
    "encode_obd_line",
    "read_obd_csv",
    "write_obd_csv",
    "validate_stream",
    "ValidationReport",
    "Finding",
    "parse_vision_event",
    "encode_vision_event",
    "read_vision_jsonl",
    "write_vision_jsonl",
]
