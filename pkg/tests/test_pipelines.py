"""End-to-end pipelines, the heat-equation baseline, and PSNR."""

import math

import numpy as np
import pytest

from srmcf import (
    ConcentrationSchedule,
    ConfigurationError,
    FlowParams,
    PipelineConfig,
    enhance,
    heat_baseline,
    inpaint,
    inpaint_then_enhance,
    psnr,
)
from srmcf.pipelines import PSNR_CAP_DB
from srmcf.synthetic import box_mask, linear_ramp, stripes


def _fast_cfg(steps=5, ntheta=8):
    return PipelineConfig(ntheta=ntheta, flow=FlowParams(steps=steps))


class TestPsnr:
    def test_known_mse(self):
        a = np.zeros((4, 4))
        b = np.full((4, 4), 0.1)  # MSE = 0.01 -> 20 dB
        assert psnr(a, b) == pytest.approx(20.0)

    def test_identical_images_hit_cap(self):
        a = np.random.default_rng(0).random((5, 5))
        assert psnr(a, a) == PSNR_CAP_DB

    def test_region_restriction(self):
        a = np.zeros((4, 4))
        b = np.zeros((4, 4))
        b[0, 0] = 0.5
        region = np.zeros((4, 4), dtype=bool)
        region[0, 0] = True
        assert psnr(a, b, region) == pytest.approx(10 * math.log10(1 / 0.25))
        region2 = ~region
        assert psnr(a, b, region2) == PSNR_CAP_DB

    def test_rejects_shape_mismatch_and_empty_region(self):
        with pytest.raises(ConfigurationError):
            psnr(np.zeros((3, 3)), np.zeros((4, 4)))
        with pytest.raises(ConfigurationError):
            psnr(np.zeros((3, 3)), np.zeros((3, 3)), np.zeros((3, 3), dtype=bool))


class TestPipelineConfig:
    def test_sigma_theta_resolution(self):
        from srmcf import GridSpec

        g = GridSpec(8, 8, 16)
        assert PipelineConfig().resolved_sigma_theta(g) == pytest.approx(1.5 * math.pi / 16)
        assert PipelineConfig(sigma_theta=0.3).resolved_sigma_theta(g) == 0.3

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"ntheta": 2},
            {"sigma_s": 0.0},
            {"sigma_theta": -0.1},
            {"projection": "nearest"},
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ConfigurationError):
            PipelineConfig(**kwargs)

    def test_concentration_schedule_validation(self):
        with pytest.raises(ConfigurationError):
            ConcentrationSchedule(every_n=0)
        with pytest.raises(ConfigurationError):
            ConcentrationSchedule(power=0.9)


class TestInpaint:
    def test_intact_pixels_bit_exact(self):
        img = linear_ramp(24, 24, angle=0.3)
        mask = box_mask(24, 24, 12, 12, 3)
        out, _ = inpaint(img, mask, _fast_cfg())
        np.testing.assert_array_equal(out[~mask], img[~mask])

    def test_deterministic_rerun(self):
        img = stripes(24, 24)
        mask = box_mask(24, 24, 12, 12, 3)
        out1, _ = inpaint(img, mask, _fast_cfg())
        out2, _ = inpaint(img, mask, _fast_cfg())
        np.testing.assert_array_equal(out1, out2)

    def test_empty_mask_returns_input_with_warning(self):
        img = linear_ramp(12, 12)
        mask = np.zeros((12, 12), dtype=bool)
        out, report = inpaint(img, mask, _fast_cfg())
        np.testing.assert_array_equal(out, img)
        assert any("no corrupted" in w for w in report.warnings)

    def test_full_mask_raises(self):
        img = linear_ramp(12, 12)
        with pytest.raises(ConfigurationError):
            inpaint(img, np.ones((12, 12), dtype=bool), _fast_cfg())

    def test_truth_reports_hole_psnr(self):
        img = linear_ramp(24, 24, angle=0.2)
        mask = box_mask(24, 24, 12, 12, 3)
        _, report = inpaint(img, mask, _fast_cfg(), truth=img)
        assert report.psnr_region is not None
        assert report.psnr_region > 10.0

    def test_ramp_hole_reconstruction_quality(self):
        """Straight level lines through a small hole are reconstructed to
        high accuracy at the default step count."""
        img = linear_ramp(48, 48, angle=0.4)
        mask = box_mask(48, 48, 24, 24, 4)
        out, report = inpaint(img, mask, truth=img)
        assert report.psnr_region > 30.0
        np.testing.assert_array_equal(out[~mask], img[~mask])

    def test_output_range(self):
        img = stripes(24, 24)
        mask = box_mask(24, 24, 12, 12, 4)
        out, _ = inpaint(img, mask, _fast_cfg(20))
        assert out.min() >= 0.0 and out.max() <= 1.0


class TestEnhance:
    def test_constant_image_is_fixed(self):
        img = np.full((16, 16), 0.5)
        out, _ = enhance(img, _fast_cfg())
        np.testing.assert_array_equal(out, img)

    def test_zero_steps_round_trip_is_exact(self):
        rng = np.random.default_rng(5)
        img = rng.random((16, 16))
        out, report = enhance(img, _fast_cfg(steps=0))
        np.testing.assert_array_equal(out, img)
        assert report.steps == 0

    def test_reduces_noise_on_stripes(self):
        from srmcf.synthetic import add_gaussian_noise

        clean = stripes(48, 48)
        noisy = add_gaussian_noise(clean, 0.05, seed=1)
        out, _ = enhance(noisy, PipelineConfig(flow=FlowParams(steps=60)))
        assert psnr(out, clean) > psnr(noisy, clean)


class TestCombo:
    def test_aggregated_report(self):
        img = stripes(24, 24)
        mask = box_mask(24, 24, 12, 12, 3)
        out, report = inpaint_then_enhance(img, mask, _fast_cfg(4), enhance_steps=3, truth=img)
        assert report.steps == 7
        assert len(report.sup_norms) == 7
        assert report.psnr_region is not None
        assert out.shape == img.shape

    def test_zero_steps_combo_preserves_intact_pixels(self):
        img = stripes(16, 16)
        mask = box_mask(16, 16, 8, 8, 2)
        out, _ = inpaint_then_enhance(img, mask, _fast_cfg(0), enhance_steps=0)
        np.testing.assert_array_equal(out[~mask], img[~mask])


class TestHeatBaseline:
    def test_intact_pixels_untouched(self):
        img = stripes(20, 20)
        mask = box_mask(20, 20, 10, 10, 3)
        out = heat_baseline(img, mask, 100)
        np.testing.assert_array_equal(out[~mask], img[~mask])

    def test_hole_converges_to_harmonic_fill_on_ramp(self):
        """The heat baseline converges to the harmonic extension, which for a
        linear ramp is the ramp itself."""
        img = linear_ramp(24, 24, angle=0.0)
        mask = box_mask(24, 24, 12, 12, 3)
        out = heat_baseline(img, mask, 3000)
        assert np.abs(out - img).max() < 1e-6

    def test_max_principle(self):
        rng = np.random.default_rng(6)
        img = rng.random((20, 20))
        mask = box_mask(20, 20, 10, 10, 4)
        out = heat_baseline(img, mask, 500)
        assert out.min() >= img[~mask].min() - 1e-12
        assert out.max() <= img[~mask].max() + 1e-12

    def test_full_mask_raises(self):
        with pytest.raises(ConfigurationError):
            heat_baseline(np.zeros((8, 8)), np.ones((8, 8), dtype=bool), 10)

    def test_empty_mask_is_identity(self):
        img = stripes(12, 12)
        np.testing.assert_array_equal(
            heat_baseline(img, np.zeros((12, 12), dtype=bool), 50), img
        )


class TestMaskValidation:
    def test_shape_mismatch(self):
        with pytest.raises(ConfigurationError):
            inpaint(np.zeros((8, 8)), np.zeros((9, 9), dtype=bool), _fast_cfg())
