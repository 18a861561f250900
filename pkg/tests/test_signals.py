"""Signal toolbox: generators, paths, and the attenuation metric."""
import numpy as np
import pytest

from hushkit import ValidationError
from hushkit.signals import (ATTENUATION_CAP_DB, FirPath, SampleBuffer,
                             attenuation_db, convolve_path,
                             generate_broadband, generate_tone, invert_phase)

FS = 8000.0


def test_tone_matches_closed_form():
    tone = generate_tone(200.0, 0.5, 0.3, 64, FS)
    k = np.arange(64)
    expected = 0.5 * np.sin(2 * np.pi * 200.0 * k / FS + 0.3)
    assert np.array_equal(tone.samples, expected)
    assert tone.sample_rate_hz == FS
    assert len(tone) == 64


@pytest.mark.parametrize("freq", [0.0, -10.0, FS / 2, FS])
def test_tone_rejects_out_of_band_frequency(freq):
    with pytest.raises(ValidationError, match="freq_hz"):
        generate_tone(freq, 1.0, 0.0, 16, FS)


def test_tone_rejects_non_finite_amplitude():
    with pytest.raises(ValidationError, match="amplitude"):
        generate_tone(200.0, np.nan, 0.0, 16, FS)


def test_broadband_is_seed_deterministic():
    a = generate_broadband(42, 50.0, 500.0, 4096, FS)
    b = generate_broadband(42, 50.0, 500.0, 4096, FS)
    c = generate_broadband(43, 50.0, 500.0, 4096, FS)
    assert np.array_equal(a.samples, b.samples)
    assert not np.array_equal(a.samples, c.samples)


def test_broadband_unit_rms():
    noise = generate_broadband(7, 50.0, 500.0, 20000, FS)
    assert abs(noise.rms() - 1.0) < 1e-12


def test_broadband_energy_concentrated_in_band():
    noise = generate_broadband(7, 50.0, 500.0, 80000, FS)
    spectrum = np.abs(np.fft.rfft(noise.samples)) ** 2
    freqs = np.fft.rfftfreq(len(noise), 1.0 / FS)
    in_band = spectrum[(freqs >= 50.0) & (freqs <= 500.0)].sum()
    assert in_band / spectrum.sum() >= 0.95


def test_broadband_rejects_inverted_band():
    with pytest.raises(ValidationError, match="band"):
        generate_broadband(0, 500.0, 50.0, 128, FS)


def test_invert_phase_cancels_exactly():
    tone = generate_tone(200.0, 1.0, 0.0, 256, FS)
    flipped = invert_phase(tone)
    assert np.array_equal(tone.samples + flipped.samples, np.zeros(256))


def test_convolve_path_matches_numpy():
    x = SampleBuffer(np.arange(10, dtype=float), FS)
    path = FirPath(np.array([0.5, 0.25, 0.125]))
    out = convolve_path(path, x)
    expected = np.convolve(x.samples, path.taps)[:10]
    assert np.allclose(out.samples, expected, rtol=0, atol=0)


def test_identity_path_is_transparent():
    x = generate_broadband(3, 50.0, 500.0, 512, FS)
    out = convolve_path(FirPath(np.array([1.0])), x)
    assert np.array_equal(out.samples, x.samples)


def test_attenuation_of_equal_signals_is_zero():
    x = generate_tone(200.0, 1.0, 0.0, 1000, FS)
    assert attenuation_db(x, x) == 0.0


def test_attenuation_caps_at_120():
    x = generate_tone(200.0, 1.0, 0.0, 1000, FS)
    silence = SampleBuffer(np.zeros(1000), FS)
    assert attenuation_db(x, silence) == ATTENUATION_CAP_DB


def test_attenuation_half_amplitude():
    x = generate_tone(200.0, 1.0, 0.0, 1000, FS)
    half = SampleBuffer(x.samples / 2.0, FS)
    assert attenuation_db(x, half) == pytest.approx(20.0 * np.log10(2.0), abs=1e-12)


def test_attenuation_rejects_length_mismatch():
    x = generate_tone(200.0, 1.0, 0.0, 1000, FS)
    y = generate_tone(200.0, 1.0, 0.0, 999, FS)
    with pytest.raises(ValidationError):
        attenuation_db(x, y)


def test_attenuation_rejects_silent_original():
    silence = SampleBuffer(np.zeros(100), FS)
    with pytest.raises(ValidationError):
        attenuation_db(silence, silence)


def test_sample_buffer_rejects_non_finite():
    with pytest.raises(ValidationError):
        SampleBuffer(np.array([1.0, np.inf]), FS)


def test_sample_buffer_rejects_bad_rate():
    with pytest.raises(ValidationError):
        SampleBuffer(np.zeros(4), 0.0)


def test_fir_path_rejects_empty():
    with pytest.raises(ValidationError):
        FirPath(np.array([]))
