"""Small dropout U-Net for grid-stacked inputs.

Four encoder/decoder levels, 16 base filters, spatial dropout after each
decoder block. Input is the 4-channel stack (RGB + grid raster), output
a single-channel logit map. Keeping the module in train mode at
inference makes the dropout layers stochastic, which is what the MC
sampling relies on; with dropout_p = 0 the forward pass is deterministic.
"""
from __future__ import annotations

import torch
from torch import nn


def _double_conv(in_ch: int, out_ch: int) -> nn.Sequential:
    return nn.Sequential(
        nn.Conv2d(in_ch, out_ch, 3, padding=1),
        nn.ReLU(inplace=True),
        nn.Conv2d(out_ch, out_ch, 3, padding=1),
        nn.ReLU(inplace=True),
    )


class DropoutUNet(nn.Module):
    def __init__(self, in_channels: int = 4, base_filters: int = 16, dropout_p: float = 0.5):
        super().__init__()
        b = base_filters
        self.dropout_p = dropout_p
        self.enc1 = _double_conv(in_channels, b)
        self.enc2 = _double_conv(b, 2 * b)
        self.enc3 = _double_conv(2 * b, 4 * b)
        self.enc4 = _double_conv(4 * b, 8 * b)
        self.pool = nn.MaxPool2d(2)
        self.bottleneck = _double_conv(8 * b, 16 * b)
        self.up4 = nn.ConvTranspose2d(16 * b, 8 * b, 2, stride=2)
        self.dec4 = _double_conv(16 * b, 8 * b)
        self.drop4 = nn.Dropout2d(dropout_p)
        self.up3 = nn.ConvTranspose2d(8 * b, 4 * b, 2, stride=2)
        self.dec3 = _double_conv(8 * b, 4 * b)
        self.drop3 = nn.Dropout2d(dropout_p)
        self.up2 = nn.ConvTranspose2d(4 * b, 2 * b, 2, stride=2)
        self.dec2 = _double_conv(4 * b, 2 * b)
        self.drop2 = nn.Dropout2d(dropout_p)
        self.up1 = nn.ConvTranspose2d(2 * b, b, 2, stride=2)
        self.dec1 = _double_conv(2 * b, b)
        self.drop1 = nn.Dropout2d(dropout_p)
        self.head = nn.Conv2d(b, 1, 1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        e1 = self.enc1(x)
        e2 = self.enc2(self.pool(e1))
        e3 = self.enc3(self.pool(e2))
        e4 = self.enc4(self.pool(e3))
        z = self.bottleneck(self.pool(e4))
        d4 = self.drop4(self.dec4(torch.cat([self.up4(z), e4], dim=1)))
        d3 = self.drop3(self.dec3(torch.cat([self.up3(d4), e3], dim=1)))
        d2 = self.drop2(self.dec2(torch.cat([self.up2(d3), e2], dim=1)))
        d1 = self.drop1(self.dec1(torch.cat([self.up1(d2), e1], dim=1)))
        return self.head(d1)
