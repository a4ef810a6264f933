"""Short-time Doppler spectra of slow-time signals.

Used for the time-frequency figures and for the Doppler-bandwidth checks;
the plotting itself lives in a separate package that consumes the CSV
export produced here.
"""

import numpy as np

from gaitradar.errors import ParameterError


def stft_spectrogram(signal, sample_rate_hz, window_len=32, overlap=0.5, window="hann"):
    """Windowed short-time spectrum of a complex signal.

    Returns (times_s, freqs_hz, power) with freqs fftshifted (signed Doppler)
    and power of shape (n_freq, n_frames).
    """
    x = np.asarray(signal)
    if x.ndim != 1:
        raise ParameterError("expected a 1-D slow-time signal")
    if x.size < window_len:
        raise ParameterError("signal shorter than the window")
    stride = max(int(round(window_len * (1.0 - overlap))), 1)
    starts = np.arange(0, x.size - window_len + 1, stride)
    if window == "hann":
        win = np.hanning(window_len)
    elif window == "rect":
        win = np.ones(window_len)
    else:
        raise ParameterError(f"unknown window {window!r}")
    frames = np.stack([x[s : s + window_len] * win for s in starts])
    spec = np.fft.fftshift(np.fft.fft(frames, axis=1), axes=1)
    power = (np.abs(spec) ** 2).T
    freqs = np.fft.fftshift(np.fft.fftfreq(window_len, d=1.0 / sample_rate_hz))
    times = (starts + window_len / 2.0) / sample_rate_hz
    return times, freqs, power


def doppler_bandwidth_hz(freqs_hz, power) -> float:
    """RMS width (sqrt of the second central moment) of the mean spectrum."""
    mean_spec = np.mean(power, axis=1) if power.ndim == 2 else power
    total = float(np.sum(mean_spec))
    if total <= 0.0:
        raise ParameterError("spectrum has no energy")
    w = mean_spec / total
    f0 = float(w @ freqs_hz)
    return float(np.sqrt(w @ (freqs_hz - f0) ** 2))


def spectrogram_rows(times_s, freqs_hz, power, floor_db=-120.0):
    """Flatten a spectrogram into (time_s, freq_hz, power_db) rows for CSV."""
    ref = float(np.max(power))
    if ref <= 0.0:
        ref = 1.0
    rows = []
    for j, t in enumerate(times_s):
        col = power[:, j]
        db = 10.0 * np.log10(np.maximum(col / ref, 10.0 ** (floor_db / 10.0)))
        for f, v in zip(freqs_hz, db):
            rows.append((float(t), float(f), float(v)))
    return rows
