# paquete src: series exactas de polígonos m-convexos
