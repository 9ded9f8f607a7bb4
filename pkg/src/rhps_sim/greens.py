"""In-plane-Fourier dyadic Green's tensor of the layered background medium.

For a source inside the excitonic layer the tensor splits into a V part
(y-y only), an H part (x-x, x-z, z-x, z-z) built by applying d/dz, d/dz'
to the closed-form scalar propagators, and a longitudinal contact term
-z^z^ delta(z-z')/(eps_bg (omega/c)^2).

The scalar propagator g(z,z') inside the layer is the direct kernel
e^{ik|z-z'|} plus four image terms weighted by the generalized reflection
coefficients; outside it is a single outgoing wave weighted by the
generalized transmission.  Derivatives act on the closed-form exponentials
geometrically: the direct term's mixed derivative contributes its regular
part k^2 e^{ik|z-z'|} only, the ẑẑ contact term written above being the
sole distributional piece of the tensor (this reading satisfies the vector
Helmholtz equation, which the finite-difference oracle checks; carrying an
extra delta from d/dz d/dz' would split the in-plane polarizations at
kpar = 0, contradicting their exact degeneracy).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .materials import HBAR_C
from .stack import (LayerStack, PlaneWaveChannel, UnsupportedObservationPoint,
                    generalized_RT)


@dataclass
class GreensEval:
    """Regular 3x3 tensor over (x, y, z) plus the coefficient of the
    delta(z-z') contact term on the zz entry (nonzero only when both points
    are inside the excitonic layer)."""

    tensor: np.ndarray
    zz_contact: complex


@dataclass
class InsideCoeffs:
    """Image-term decomposition of the in-layer scalar propagator:
    g = e^{ik|z-z'|} + sum_{s,s'} c[s,s'] e^{i s k z} e^{i s' k z'} with
    s index 0 -> +1, 1 -> -1."""

    k: complex
    c: np.ndarray  # (2, 2)


@dataclass
class OutsideCoeffs:
    """Outgoing decomposition for observation in an end region:
    g = e^{i sigma kz_out (z - z_ref)} * sum_{s'} rho[s'] e^{i s' k z'}."""

    sigma: int
    kz_out: complex
    eps_out: float
    z_ref: float
    rho: np.ndarray  # (2,)


class GreensKernel:
    """Prepared Green's-tensor evaluator for one (stack, omega, kpar)."""

    def __init__(self, stack: LayerStack, omega: complex, kpar: float):
        self.stack = stack
        self.omega = omega
        self.kpar = kpar
        self.k0 = omega / HBAR_C
        self.eps_bg = stack.eps_exc
        self.d = stack.d
        self.rt = {pol: generalized_RT(stack, PlaneWaveChannel(omega, kpar, pol))
                   for pol in ("V", "H")}
        self.k = self.rt["V"].k

    def inside_coeffs(self, pol: str) -> InsideCoeffs:
        rt = self.rt[pol]
        k, d = rt.k, self.d
        e2 = np.exp(2j * k * d)
        c = np.array([[rt.R_L * rt.M, rt.R_L * rt.R_R * rt.M * e2],
                      [rt.R_L * rt.R_R * rt.M * e2, rt.R_R * rt.M * e2]],
                     dtype=complex)
        return InsideCoeffs(k=k, c=c)

    def outside_coeffs(self, pol: str, side: str) -> OutsideCoeffs:
        rt = self.rt[pol]
        k, d = rt.k, self.d
        if side == "left":
            rho = np.array([rt.T_L * rt.M,
                            rt.T_L * rt.M * rt.R_R * np.exp(2j * k * d)])
            kz_out = self.stack.kz(0, self.omega, self.kpar)
            return OutsideCoeffs(sigma=-1, kz_out=kz_out,
                                 eps_out=float(self.stack.eps[0]),
                                 z_ref=self.stack.z_left, rho=rho)
        if side == "right":
            ekd = np.exp(1j * k * d)
            rho = np.array([rt.T_R * rt.M * rt.R_L * ekd, rt.T_R * rt.M * ekd])
            kz_out = self.stack.kz(self.stack.n_regions - 1, self.omega,
                                   self.kpar)
            return OutsideCoeffs(sigma=+1, kz_out=kz_out,
                                 eps_out=float(self.stack.eps[-1]),
                                 z_ref=self.stack.z_right, rho=rho)
        raise ValueError(f"unknown side {side!r}")

    # ------------------------------------------------------------------
    def _locate(self, z: float) -> str:
        s = self.stack
        if 0.0 <= z <= s.d:
            return "inside"
        if z <= s.z_left:
            return "left"
        if z >= s.z_right:
            return "right"
        raise UnsupportedObservationPoint(
            f"z={z} lies in an interior passive layer")

    def scalar(self, pol: str, z: float, zp: float) -> complex:
        """g^{V/H}(z, z') for z' in the excitonic layer."""
        if not (0.0 <= zp <= self.d):
            raise UnsupportedObservationPoint("source z' must lie in the "
                                              "excitonic layer")
        where = self._locate(z)
        k = self.rt[pol].k
        if where == "inside":
            ic = self.inside_coeffs(pol)
            g = np.exp(1j * k * abs(z - zp))
            for si, s in enumerate((1.0, -1.0)):
                for sj, sp in enumerate((1.0, -1.0)):
                    g += ic.c[si, sj] * np.exp(1j * k * (s * z + sp * zp))
            return complex(g)
        oc = self.outside_coeffs(pol, where)
        obs = np.exp(1j * oc.sigma * oc.kz_out * (z - oc.z_ref))
        src = oc.rho[0] * np.exp(1j * k * zp) + oc.rho[1] * np.exp(-1j * k * zp)
        return complex(obs * src)

    def dyadic(self, z: float, zp: float) -> GreensEval:
        """Full 3x3 tensor at (z, z'); source inside the excitonic layer."""
        if not (0.0 <= zp <= self.d):
            raise UnsupportedObservationPoint("source z' must lie in the "
                                              "excitonic layer")
        where = self._locate(z)
        kp = self.kpar
        k0sq = self.k0 * self.k0
        T = np.zeros((3, 3), dtype=complex)
        kV = self.rt["V"].k
        kH = self.rt["H"].k
        contact = 0.0 + 0.0j
        if where == "inside":
            gV = self.scalar("V", z, zp)
            T[1, 1] = gV
            icH = self.inside_coeffs("H")
            pref = 1.0 / (self.eps_bg * k0sq)
            sgn = np.sign(z - zp) if z != zp else 0.0
            e_dir = np.exp(1j * kH * abs(z - zp))
            xx = kH * kH * e_dir
            xz = -kp * kH * sgn * e_dir
            zx = xz
            zz = kp * kp * e_dir
            for si, s in enumerate((1.0, -1.0)):
                for sj, sp in enumerate((1.0, -1.0)):
                    c = icH.c[si, sj] * np.exp(1j * kH * (s * z + sp * zp))
                    xx += -s * sp * kH * kH * c
                    xz += -s * kH * kp * c
                    zx += sp * kH * kp * c
                    zz += kp * kp * c
            T[0, 0], T[0, 2], T[2, 0], T[2, 2] = (xx * pref, xz * pref,
                                                  zx * pref, zz * pref)
            contact = -1.0 / (self.eps_bg * k0sq)
        else:
            ocV = self.outside_coeffs("V", where)
            obsV = np.exp(1j * ocV.sigma * ocV.kz_out * (z - ocV.z_ref))
            T[1, 1] = obsV * (ocV.rho[0] * np.exp(1j * kV * zp)
                              + ocV.rho[1] * np.exp(-1j * kV * zp))
            ocH = self.outside_coeffs("H", where)
            pref = 1.0 / (np.sqrt(self.eps_bg * ocH.eps_out) * k0sq)
            obs = np.exp(1j * ocH.sigma * ocH.kz_out * (z - ocH.z_ref))
            dz_obs = 1j * ocH.sigma * ocH.kz_out
            for sj, sp in enumerate((1.0, -1.0)):
                src = ocH.rho[sj] * np.exp(1j * sp * kH * zp)
                dzp = 1j * sp * kH
                T[0, 0] += dz_obs * dzp * obs * src * pref
                T[0, 2] += 1j * kp * dz_obs * obs * src * pref
                T[2, 0] += -1j * kp * dzp * obs * src * pref
                T[2, 2] += kp * kp * obs * src * pref
        full = np.zeros((3, 3), dtype=complex)
        kfac_V = -1.0 / (2j * kV)
        kfac_H = -1.0 / (2j * kH)
        full[1, 1] = kfac_V * T[1, 1]
        for (i, j) in ((0, 0), (0, 2), (2, 0), (2, 2)):
            full[i, j] = kfac_H * T[i, j]
        return GreensEval(tensor=full, zz_contact=contact)


def scalar_greens(stack: LayerStack, channel: PlaneWaveChannel, z: float,
                  zp: float) -> complex:
    """g^{V/H}_kpar(z, z', omega) by the three-case closed form."""
    return GreensKernel(stack, channel.omega, channel.kpar).scalar(
        channel.pol, z, zp)


def dyadic_greens(stack: LayerStack, omega: complex, kpar: float, z: float,
                  zp: float) -> GreensEval:
    return GreensKernel(stack, omega, kpar).dyadic(z, zp)
