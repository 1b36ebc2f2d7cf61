import requests

BASE = 'https://hue-bridge.local/clip/v2'
HEADERS = {'hue-application-key': 'demo-app-key'}
LEGACY_NAMES = True


def list_bulbs():
    url = BASE + '/resource/light'
    if LEGACY_NAMES:
        url = BASE + '/resource/light'
    resp = requests.get(url, headers=HEADERS)
    return resp.json()
