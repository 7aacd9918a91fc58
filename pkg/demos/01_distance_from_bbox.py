"""How the simulator turns a bounding box height into a distance.

A stop sign of known height images onto the camera sensor; the pixel
height of its bounding box is all the controller gets to work with.
"""

from aebsim import CameraSpec, estimate_distance, focal_length, project_bbox_height

camera = CameraSpec(image_height_px=600, fov_deg=90.0)
print(f"camera: {camera.image_height_px} px tall, {camera.fov_deg} deg fov")
print(f"focal length: {focal_length(camera):.1f} px")
print()

# a 0.75 m sign seen at a few ranges
sign_height = 0.75
for d in (7.5, 15.0, 30.0, 60.0):
    h = project_bbox_height(camera, d, sign_height)
    print(f"sign at {d:5.1f} m -> bbox {h:6.2f} px")
print()

# the controller inverts the projection to recover range
for h in (30.0, 12.0, 5.0):
    d = estimate_distance(camera, h, sign_height)
    print(f"bbox {h:5.1f} px -> estimated {d:6.2f} m")
print()

# round trip is exact: project then estimate returns the input distance
d0 = 23.45
h = project_bbox_height(camera, d0, sign_height)
d1 = estimate_distance(camera, h, sign_height)
print(f"round trip: {d0} m -> {h:.4f} px -> {d1} m")
