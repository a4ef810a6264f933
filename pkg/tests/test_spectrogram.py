import numpy as np
import pytest

from gaitradar.errors import ParameterError
from gaitradar.spectrogram import doppler_bandwidth_hz, spectrogram_rows, stft_spectrogram


def test_tone_peak_frequency_within_bin_width():
    fs = 1000.0
    t = np.arange(2000) / fs
    tone = np.exp(2j * np.pi * 160.0 * t)
    times, freqs, power = stft_spectrogram(tone, fs, window_len=32, overlap=0.5)
    bin_width = fs / 32
    peak_freq = freqs[np.argmax(power.mean(axis=1))]
    assert abs(peak_freq - 160.0) <= bin_width
    assert power.shape == (32, times.size)


def test_negative_frequencies_resolved():
    fs = 1000.0
    t = np.arange(1000) / fs
    tone = np.exp(-2j * np.pi * 200.0 * t)
    _, freqs, power = stft_spectrogram(tone, fs)
    assert freqs[np.argmax(power.mean(axis=1))] < 0


def test_bandwidth_orders_narrow_vs_wide():
    fs = 1000.0
    t = np.arange(4000) / fs
    tone = np.exp(2j * np.pi * 50.0 * t)
    wobble = np.exp(2j * np.pi * (50.0 * t + 40.0 * np.sin(2 * np.pi * 1.0 * t)))
    _, freqs, p_tone = stft_spectrogram(tone, fs)
    _, _, p_wob = stft_spectrogram(wobble, fs)
    assert doppler_bandwidth_hz(freqs, p_wob) > 2 * doppler_bandwidth_hz(freqs, p_tone)


def test_bandwidth_is_centered_second_moment():
    freqs = np.array([-10.0, 0.0, 10.0])
    power = np.array([[1.0], [0.0], [1.0]])
    assert doppler_bandwidth_hz(freqs, power) == pytest.approx(10.0)
    shifted = np.array([[0.0], [1.0], [1.0]])  # mean at +5, spread 5
    assert doppler_bandwidth_hz(freqs, shifted) == pytest.approx(5.0)


def test_rows_schema_and_reference_level():
    fs = 1000.0
    t = np.arange(256) / fs
    tone = np.exp(2j * np.pi * 100.0 * t)
    times, freqs, power = stft_spectrogram(tone, fs)
    rows = spectrogram_rows(times, freqs, power)
    assert len(rows) == times.size * freqs.size
    assert max(r[2] for r in rows) == pytest.approx(0.0)


def test_short_signal_rejected():
    with pytest.raises(ParameterError):
        stft_spectrogram(np.ones(8), 1000.0, window_len=32)
