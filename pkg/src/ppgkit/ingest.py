"""PhysioNet WFDB ingestion: text headers, format-16 signal files, MIT beat
annotations, plus a CSV fallback. Only storage format 16 is supported; the
small writers at the bottom exist to synthesize records for tests and demos.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

ACTIVITIES = ("High", "Low", "Run", "Walk")

# MIT annotation pseudo-codes
_SKIP = 59
_NUM = 60
_SUB = 61
_CHN = 62
_AUX = 63

NORMAL_BEAT = 1


class MalformedHeader(ValueError):
    pass


class UnsupportedFormat(ValueError):
    pass


class TruncatedFile(ValueError):
    pass


class ChannelOutOfRange(IndexError):
    pass


class TruncatedAnnotation(ValueError):
    pass


class MalformedCsv(ValueError):
    pass


@dataclass(frozen=True)
class SignalSpec:
    file_name: str
    fmt: int
    gain: float            # adu per physical unit
    baseline: int          # adu reading at physical zero
    units: str
    description: str


@dataclass(frozen=True)
class RecordHeader:
    record_name: str
    num_signals: int
    sampling_rate_hz: float
    num_samples: int       # 0 = determined by signal file length
    signals: tuple[SignalSpec, ...]

    def __post_init__(self):
        if self.sampling_rate_hz <= 0:
            raise MalformedHeader("sampling rate must be positive")
        if self.num_signals != len(self.signals):
            raise MalformedHeader(
                f"declared {self.num_signals} signals, "
                f"parsed {len(self.signals)} descriptor lines")
        for s in self.signals:
            if s.gain == 0:
                raise MalformedHeader(f"gain must be nonzero ({s.file_name})")


@dataclass(frozen=True, order=True)
class AnnotationEvent:
    sample_index: int
    code: int


@dataclass
class Record:
    header: RecordHeader
    channels: list[np.ndarray]            # physical units, float64
    annotations: list[AnnotationEvent] = field(default_factory=list)
    activity_label: str | None = None     # one of ACTIVITIES when set
    subject_id: str | None = None

    def __post_init__(self):
        if self.activity_label is not None and self.activity_label not in ACTIVITIES:
            raise ValueError(f"unknown activity {self.activity_label!r}")
        for ch in self.channels:
            if self.header.num_samples and len(ch) != self.header.num_samples:
                raise ValueError("channel length disagrees with header")

    @property
    def fs(self) -> float:
        return self.header.sampling_rate_hz


# --- header -----------------------------------------------------------------

_GAIN_RE = re.compile(r"^([-+0-9.eE]+)(?:\(([-+]?\d+)\))?(?:/(\S+))?$")


def _parse_signal_line(line: str) -> SignalSpec:
    toks = line.split()
    if len(toks) < 2:
        raise MalformedHeader(f"signal line needs file name and format: {line!r}")
    file_name = toks[0]
    m = re.match(r"^(\d+)", toks[1])
    if not m:
        raise MalformedHeader(f"non-numeric storage format in {line!r}")
    fmt = int(m.group(1))
    if fmt != 16:
        raise UnsupportedFormat(f"storage format {fmt} not supported (only 16)")

    gain, baseline, units = 200.0, None, "adu"
    if len(toks) >= 3:
        m = _GAIN_RE.match(toks[2])
        if not m:
            raise MalformedHeader(f"bad gain field {toks[2]!r}")
        try:
            gain = float(m.group(1))
        except ValueError as e:
            raise MalformedHeader(f"bad gain field {toks[2]!r}") from e
        if m.group(2) is not None:
            baseline = int(m.group(2))
        if m.group(3) is not None:
            units = m.group(3)

    # optional numeric tail: adc_res adc_zero init_value checksum block_size;
    # anything that stops parsing as an integer starts the description
    numeric = []
    rest = toks[3:]
    while rest and len(numeric) < 5:
        try:
            numeric.append(int(rest[0]))
        except ValueError:
            break
        rest = rest[1:]
    if baseline is None:
        baseline = numeric[1] if len(numeric) >= 2 else 0
    return SignalSpec(file_name, fmt, gain, baseline, units, " ".join(rest))


def parse_header(text: str) -> RecordHeader:
    """Parse the contents of a WFDB .hea file."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise MalformedHeader("empty header")

    toks = lines[0].split()
    if len(toks) < 3:
        raise MalformedHeader(f"record line needs name, nsig, fs: {lines[0]!r}")
    name = toks[0].split("/")[0]
    try:
        nsig = int(toks[1])
        fs = float(toks[2].split("/")[0])
        nsamp = int(toks[3]) if len(toks) > 3 else 0
    except ValueError as e:
        raise MalformedHeader(f"non-numeric record line field: {lines[0]!r}") from e
    if nsamp < 0:
        raise MalformedHeader("negative sample count")

    signals = tuple(_parse_signal_line(ln) for ln in lines[1:])
    return RecordHeader(name, nsig, fs, nsamp, signals)


# --- format-16 signals --------------------------------------------------------

def read_raw_adu(header: RecordHeader, data: bytes) -> np.ndarray:
    """Decode an interleaved format-16 file to an int16 array [frames, nsig]."""
    nsig = header.num_signals
    if len(data) % (2 * nsig) != 0:
        raise TruncatedFile(
            f"{len(data)} bytes is not a whole number of {nsig}-signal frames")
    frames = np.frombuffer(data, dtype="<i2").reshape(-1, nsig)
    if header.num_samples:
        if frames.shape[0] < header.num_samples:
            raise TruncatedFile(
                f"header promises {header.num_samples} samples, "
                f"file holds {frames.shape[0]}")
        frames = frames[:header.num_samples]
    return frames


def read_signal_f16(header: RecordHeader, data: bytes, channel: int) -> np.ndarray:
    """Decode one channel to physical units: (adu - baseline) / gain."""
    if not 0 <= channel < header.num_signals:
        raise ChannelOutOfRange(f"channel {channel} of {header.num_signals}")
    adu = read_raw_adu(header, data)[:, channel]
    sig = header.signals[channel]
    return (adu.astype(np.float64) - sig.baseline) / sig.gain


def read_all_signals_f16(header: RecordHeader, data: bytes) -> list[np.ndarray]:
    adu = read_raw_adu(header, data)
    return [(adu[:, i].astype(np.float64) - s.baseline) / s.gain
            for i, s in enumerate(header.signals)]


# --- MIT annotations ----------------------------------------------------------

def read_annotations(data: bytes) -> list[AnnotationEvent]:
    """Decode an MIT annotation byte stream.

    Each 16-bit little-endian word packs a 6-bit code and a 10-bit interval.
    Intervals accumulate into sample indices. SKIP consumes a 4-byte interval
    extension (high word first), NUM/SUB/CHN carry their value in the interval
    field, AUX declares a payload length (padded to even). Word 0 terminates.
    """
    if len(data) % 2 != 0:
        raise TruncatedAnnotation("odd byte count")
    words = np.frombuffer(data, dtype="<u2")
    events: list[AnnotationEvent] = []
    time = 0
    i = 0
    n = len(words)
    while i < n:
        word = int(words[i])
        i += 1
        code = word >> 10
        interval = word & 0x3FF
        if word == 0:
            break
        if code == _SKIP:
            if i + 2 > n:
                raise TruncatedAnnotation("SKIP extension runs past end of file")
            time += (int(words[i]) << 16) | int(words[i + 1])
            i += 2
        elif code in (_NUM, _SUB, _CHN):
            continue
        elif code == _AUX:
            aux_words = (interval + 1) // 2
            if i + aux_words > n:
                raise TruncatedAnnotation("AUX payload runs past end of file")
            i += aux_words
        else:
            time += interval
            if code != 0:
                events.append(AnnotationEvent(time, code))
    return events


# --- CSV fallback ---------------------------------------------------------------

def load_csv(text: str, fs: float, *, subject_id: str | None = None,
             activity_label: str | None = None) -> Record:
    """Parse a one-channel CSV ("value" or "t,value" header) into a Record."""
    if fs <= 0:
        raise ValueError("fs must be positive")
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedCsv("empty file")
    head = lines[0].replace(" ", "").lower()
    if head == "value":
        col = 0
    elif head == "t,value":
        col = 1
    else:
        raise MalformedCsv(f'expected header "value" or "t,value", got {lines[0]!r}')

    values = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) <= col:
            raise MalformedCsv(f"row {ln!r} has too few cells")
        try:
            values.append(float(cells[col]))
        except ValueError as e:
            raise MalformedCsv(f"non-numeric value cell in row {ln!r}") from e

    header = RecordHeader(
        record_name="csv", num_signals=1, sampling_rate_hz=fs,
        num_samples=len(values),
        signals=(SignalSpec("csv", 16, 1.0, 0, "adu", ""),))
    return Record(header, [np.asarray(values, dtype=np.float64)],
                  activity_label=activity_label, subject_id=subject_id)


# --- manifest --------------------------------------------------------------------

@dataclass(frozen=True)
class ManifestEntry:
    record: str            # path stem relative to the dataset directory
    subject: str
    activity: str
    ppg_channel: int
    ecg_channel: int
    filter_15hz: bool = False   # re-apply the 15 Hz bike filter on ingest

    def __post_init__(self):
        if self.activity not in ACTIVITIES:
            raise ValueError(f"unknown activity {self.activity!r}")


def load_manifest(path: str | Path) -> list[ManifestEntry]:
    raw = json.loads(Path(path).read_text())
    if not isinstance(raw, list):
        raise ValueError("manifest must be a JSON array")
    return [ManifestEntry(
        record=e["record"], subject=e["subject"], activity=e["activity"],
        ppg_channel=int(e["ppg_channel"]), ecg_channel=int(e["ecg_channel"]),
        filter_15hz=bool(e.get("filter_15hz", False))) for e in raw]


def load_record(dataset_dir: str | Path, entry: ManifestEntry) -> Record:
    """Read the .hea/.dat/.atr trio named by a manifest entry."""
    base = Path(dataset_dir) / entry.record
    header = parse_header(base.with_suffix(".hea").read_text())
    channels = read_all_signals_f16(header, base.with_suffix(".dat").read_bytes())
    atr = base.with_suffix(".atr")
    annotations = read_annotations(atr.read_bytes()) if atr.exists() else []
    return Record(header, channels, annotations,
                  activity_label=entry.activity, subject_id=entry.subject)


# --- writers (synthesis / round-trip oracles) --------------------------------------

def write_header(header: RecordHeader) -> str:
    lines = [f"{header.record_name} {header.num_signals} "
             f"{header.sampling_rate_hz:g} {header.num_samples}"]
    for s in header.signals:
        line = f"{s.file_name} {s.fmt} {s.gain:g}({s.baseline})/{s.units}"
        if s.description:
            line += f" {s.description}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def write_signal_f16(channels_adu: list[np.ndarray]) -> bytes:
    """Interleave int16 channels into a format-16 byte stream."""
    frames = np.stack([np.asarray(c) for c in channels_adu], axis=1)
    return frames.astype("<i2").tobytes()


def write_annotations(events: list[AnnotationEvent]) -> bytes:
    """Encode beat events as an MIT annotation stream (SKIP for long gaps)."""
    words: list[int] = []
    time = 0
    for ev in sorted(events):
        delta = ev.sample_index - time
        if delta < 0:
            raise ValueError("events must be ordered by sample index")
        if delta > 0x3FF:
            words.append(_SKIP << 10)
            words.append((delta >> 16) & 0xFFFF)
            words.append(delta & 0xFFFF)
            delta = 0
        words.append((ev.code << 10) | delta)
        time = ev.sample_index
    words.append(0)
    return np.asarray(words, dtype="<u2").tobytes()
