from pixelband.src.metrics.quality import MetricReport, compare, mse, nrmse, psnr, ssim

__all__ = ["MetricReport", "compare", "mse", "nrmse", "psnr", "ssim"]
