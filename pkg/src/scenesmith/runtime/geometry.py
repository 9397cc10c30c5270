"""Small 3D math kit: vectors, rotation matrices, Euler angles.

Rotation convention used throughout the runtime: Euler angles in degrees,
applied Z first, then X, then Y, all about world axes. The composed matrix
is ``M = Ry(y) @ Rx(x) @ Rz(z)`` acting on column vectors.
"""

from __future__ import annotations

import math

Vec3 = tuple[float, float, float]
Mat3 = tuple[Vec3, Vec3, Vec3]


def vadd(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def vsub(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def vscale(a: Vec3, k: float) -> Vec3:
    return (a[0] * k, a[1] * k, a[2] * k)


def vnorm(a: Vec3) -> float:
    return math.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])


def vunit(a: Vec3) -> Vec3:
    n = vnorm(a)
    if n == 0.0:
        raise ValueError("cannot normalize zero vector")
    return (a[0] / n, a[1] / n, a[2] / n)


def mat_mul(a: Mat3, b: Mat3) -> Mat3:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
        for i in range(3)
    )  # type: ignore[return-value]


def rot_x(deg: float) -> Mat3:
    c, s = math.cos(math.radians(deg)), math.sin(math.radians(deg))
    return ((1.0, 0.0, 0.0), (0.0, c, -s), (0.0, s, c))


def rot_y(deg: float) -> Mat3:
    c, s = math.cos(math.radians(deg)), math.sin(math.radians(deg))
    return ((c, 0.0, s), (0.0, 1.0, 0.0), (-s, 0.0, c))


def rot_z(deg: float) -> Mat3:
    c, s = math.cos(math.radians(deg)), math.sin(math.radians(deg))
    return ((c, -s, 0.0), (s, c, 0.0), (0.0, 0.0, 1.0))


def euler_to_matrix(euler_deg: Vec3) -> Mat3:
    x, y, z = euler_deg
    return mat_mul(rot_y(y), mat_mul(rot_x(x), rot_z(z)))


def matrix_to_euler(m: Mat3) -> Vec3:
    """Decompose ``Ry @ Rx @ Rz`` back into (x, y, z) degrees.

    x lands in [-90, 90]; y and z in (-180, 180]. At the gimbal-lock
    poles (x = +-90) z is fixed to 0 and y absorbs the free angle.
    """
    sx = -m[1][2]
    sx = max(-1.0, min(1.0, sx))
    if abs(sx) >= 1.0 - 1e-12:
        x = math.copysign(90.0, sx)
        # With z pinned to 0: m[0][0] = cos(y -+ z), m[0][1] = +-sin(y -+ z).
        if sx > 0:
            y = math.degrees(math.atan2(m[0][1], m[0][0]))
        else:
            y = math.degrees(math.atan2(-m[0][1], m[0][0]))
        z = 0.0
    else:
        x = math.degrees(math.asin(sx))
        y = math.degrees(math.atan2(m[0][2], m[2][2]))
        z = math.degrees(math.atan2(m[1][0], m[1][1]))
    return (x, y, z)


def axis_angle_matrix(axis: Vec3, deg: float) -> Mat3:
    """Rodrigues rotation matrix for a unit axis."""
    ux, uy, uz = axis
    c, s = math.cos(math.radians(deg)), math.sin(math.radians(deg))
    t = 1.0 - c
    return (
        (c + ux * ux * t, ux * uy * t - uz * s, ux * uz * t + uy * s),
        (uy * ux * t + uz * s, c + uy * uy * t, uy * uz * t - ux * s),
        (uz * ux * t - uy * s, uz * uy * t + ux * s, c + uz * uz * t),
    )


def rotate_euler(euler_deg: Vec3, axis: Vec3, deg: float) -> Vec3:
    """Compose an extra world-frame rotation about ``axis`` onto an Euler triple."""
    m = mat_mul(axis_angle_matrix(axis, deg), euler_to_matrix(euler_deg))
    return matrix_to_euler(m)
