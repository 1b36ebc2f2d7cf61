import requests

LIGHTS_URL = 'https://hue-bridge.local/clip/v2/resources/light'
HEADERS = {'hue-application-key': 'demo-app-key'}


def list_lights():
    resp = requests.get(LIGHTS_URL, headers=HEADERS)
    return resp.json()
